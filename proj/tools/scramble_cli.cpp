// scramble: experiment commands emitting CSV time series + JSON manifests.
// Exit codes: 0 success, 1 validation error, 2 runtime failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "scramble/diagnostics.hpp"
#include "scramble/dynamics.hpp"
#include "scramble/ensemble.hpp"
#include "scramble/io.hpp"
#include "scramble/models.hpp"
#include "scramble/rng.hpp"

using namespace scramble;

namespace {

struct Common {
    std::string config_path;
    std::string out_dir = ".";
    uint64_t seed = 0;
    int realizations = 0;
    std::vector<double> gammas;
    std::string basis;
    int threads = 0;
    bool dry_run = false;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config_path, "JSON config file (base settings)");
    sub->add_option("--out", c.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", c.seed, "master seed override");
    sub->add_option("--realizations", c.realizations, "disorder realization count override");
    sub->add_option("--gamma", c.gammas, "gamma/J level (repeatable)");
    sub->add_option("--basis", c.basis, "decoherence basis")
        ->check(CLI::IsMember({"computational", "energy"}));
    sub->add_option("--threads", c.threads, "worker threads (default: SCRAMBLE_THREADS or all)");
    sub->add_flag("--dry-run", c.dry_run, "validate and print the plan without computing");
}

int resolve_threads(const CLI::App* sub, const Common& c) {
    if (sub->count("--threads")) return c.threads;
    if (const char* env = std::getenv("SCRAMBLE_THREADS")) return std::atoi(env);
    return 0;
}

std::string read_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::string text;
    char buf[4096];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, n);
    std::fclose(f);
    return text;
}

ExperimentConfig base_config(const CLI::App* sub, const Common& c,
                             const ExperimentConfig& fallback) {
    ExperimentConfig cfg =
        c.config_path.empty() ? fallback : parse_config(read_file(c.config_path));
    if (sub->count("--seed")) cfg.master_seed = c.seed;
    if (sub->count("--realizations")) cfg.n_realizations = c.realizations;
    if (sub->count("--basis"))
        cfg.decoherence = c.basis == "energy" ? DecoherenceBasis::energy
                                              : DecoherenceBasis::computational;
    return cfg;
}

std::string gamma_tag(double g) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", g);
    return buf;
}

// Runs the config once per gamma level and writes <name>_g<level>.csv.
// Returns the emitted series for callers that post-process them.
std::vector<TimeSeries> run_levels(const std::string& name, ExperimentConfig cfg,
                                   const std::vector<double>& gammas, const Common& c,
                                   int threads) {
    std::filesystem::create_directories(c.out_dir);
    std::vector<TimeSeries> out;
    for (double g : gammas) {
        ExperimentConfig run = cfg;
        run.gamma_over_j = g;
        if (g == 0.0)
            run.decoherence.reset();
        else if (!run.decoherence)
            run.decoherence = DecoherenceBasis::energy;
        run.validate();
        const std::string path =
            (std::filesystem::path(c.out_dir) / (name + "_g" + gamma_tag(g) + ".csv"))
                .string();
        if (c.dry_run) {
            std::printf("plan: %s\n%s\n", path.c_str(), config_to_json(run).c_str());
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        EnsembleResult res = run_ensemble(run, threads);
        if (!res.failures.empty()) {
            std::fprintf(stderr, "%zu realization(s) failed; first: %s\n",
                         res.failures.size(), res.failures[0].message.c_str());
            throw std::runtime_error("ensemble run incomplete");
        }
        RunManifest manifest;
        manifest.config_json = config_to_json(run);
        manifest.timestamp = utc_timestamp_now();
        manifest.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        emit_csv(res.series, manifest, path);
        std::printf("wrote %s (%d realizations, %.1f s)\n", path.c_str(),
                    res.series.traces.begin()->second.n, manifest.elapsed_seconds);
        out.push_back(std::move(res.series));
    }
    return out;
}

ExperimentConfig syk_default(int n_majorana, std::set<Diagnostic> diag) {
    ExperimentConfig cfg;
    SykSpec s;
    s.n_majorana = n_majorana;
    cfg.model = s;
    cfg.diagnostics = std::move(diag);
    return cfg;
}

int cmd_bound_check(const CLI::App* sub, const Common& c) {
    ExperimentConfig fallback = syk_default(8, {Diagnostic::bound, Diagnostic::mutual_info});
    fallback.grid = TimeGrid{10.0, 51};
    ExperimentConfig cfg = base_config(sub, c, fallback);
    cfg.decoherence.reset();
    cfg.diagnostics.insert(Diagnostic::bound);
    const std::vector<double> levels = {0.0};
    const int threads = resolve_threads(sub, c);
    const auto series = run_levels("bound-check", cfg, levels, c, threads);
    if (c.dry_run) return 0;

    // scan every realization, not just the ensemble mean
    ExperimentConfig run = cfg;
    run.gamma_over_j = 0.0;
    double worst = 1e300;
    for (int i = 0; i < run.n_realizations; ++i) {
        const TimeSeries ts = run_realization(run, i);
        for (double r : ts.traces.at("bound_residual").mean) worst = std::min(worst, r);
    }
    std::printf("worst bound residual over %d realizations: %.3e\n", run.n_realizations,
                worst);
    if (worst < -1e-9) {
        std::fprintf(stderr, "bound violated (residual %.3e < -1e-9)\n", worst);
        return 2;
    }
    return 0;
}

int selftest() {
    int failures = 0;
    auto report = [&](const char* what, bool ok) {
        std::printf("%-34s %s\n", what, ok ? "ok" : "FAIL");
        if (!ok) ++failures;
    };

    {
        SykSpec spec;
        const double target = 6.0 / (12.0 * 12.0 * 12.0);
        std::vector<double> xs;
        for (uint64_t seed = 0; xs.size() < 10000; ++seed) {
            spec.seed = seed;
            for (const auto& [idx, val] : sample_syk_couplings(spec).values)
                xs.push_back(val);
        }
        double mean = 0.0, var = 0.0;
        for (double x : xs) mean += x;
        mean /= xs.size();
        for (double x : xs) var += (x - mean) * (x - mean);
        var /= (xs.size() - 1.0);
        const double se = target * std::sqrt(2.0 / (xs.size() - 1.0));
        report("SYK coupling variance", std::abs(var - target) < 5 * se);
    }
    {
        CounterRng rng(1);
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            Operator h(8, 8);
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j)
                    h(i, j) = cplx(rng.next_gaussian(), rng.next_gaussian());
            h = 0.5 * (h + Operator(h.adjoint()));
            const Operator w = embed_single_qubit(pauli_X(), k % 3, 3);
            const Operator v = embed_single_qubit(pauli_Y(), (k + 1) % 3, 3);
            const DensityMatrix rho = all_up_state(3);
            const double t = 0.3 + 0.4 * k;
            worst = std::max(worst, std::abs(squared_commutator(rho, w, v, h, t) -
                                             2.0 * (1.0 - otoc(rho, w, v, h, t).real())));
        }
        report("squared-commutator identity", worst < 1e-10);
    }
    {
        SykSpec s;
        s.n_majorana = 4;
        const Operator h = build_syk(s, sample_syk_couplings(s));
        const JointModel model = build_joint_dephasing_model(2, h, 0.5);
        double worst = 0.0;
        for (int j = 0; j <= 10; ++j)
            worst = std::max(
                worst, std::abs(entropy_decomposition(model, all_up_state(2), j).residual()));
        report("entropy decomposition identity", worst < 1e-8);
    }
    {
        CounterRng rng(7);
        Operator o(8, 8), h(8, 8);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                o(i, j) = cplx(rng.next_gaussian(), rng.next_gaussian());
                h(i, j) = cplx(rng.next_gaussian(), rng.next_gaussian());
            }
        o = 0.5 * (o + Operator(o.adjoint()));
        h = 0.5 * (h + Operator(h.adjoint()));
        const Operator w = haar_unitary(8, rng);
        const Spectrum so = eig_hermitian(o);
        Operator rho_m = Operator::Zero(8, 8);
        for (int i = 0; i < 8; ++i)
            rho_m += (1.0 / 8.0) * so.eigenvectors.col(i) * so.eigenvectors.col(i).adjoint();
        const DensityMatrix rho = DensityMatrix::unchecked(rho_m);
        const auto dist = wingflap_distribution(rho, o, w, h, 1.1);
        double worst = 0.0;
        for (double u : {0.1, 0.5, 1.0}) {
            const cplx f = otoc(rho, w, unitary_exp(o, -u), h, 1.1);
            worst = std::max(worst, std::abs(f - characteristic_function(dist, -u)));
        }
        report("wing-flap equivalence", worst < 1e-10);
    }
    {
        int negative = 0;
        for (int seed = 0; seed < 20; ++seed) {
            CounterRng rng(100 + seed);
            const Operator u = haar_unitary(16, rng);
            if (tripartite_mutual_information(pure_state(u.col(0)), SubsystemMask({0}),
                                              SubsystemMask({1}), SubsystemMask({2})) < 0.0)
                ++negative;
        }
        report("TMI negativity (Haar states)", negative >= 18);
    }
    {
        SykSpec s;
        s.n_majorana = 6;
        s.seed = 3;
        LindbladSpec spec;
        spec.hamiltonian = build_syk(s, sample_syk_couplings(s));
        spec.jump_ops = dephasing_jumps(DecoherenceBasis::energy, spec.hamiltonian, 3);
        spec.gamma = 0.4;
        const DensityMatrix rt = evolve_lindblad(neel_state(3), spec, 2.0);
        const bool ok = std::abs(rt.mat.trace().real() - 1.0) < 1e-9 &&
                        eig_hermitian(rt.mat).eigenvalues.minCoeff() >= -1e-9;
        report("Lindblad trace and positivity", ok);
        const Operator prop = (liouvillian(spec).adjoint() * 2.0).exp();
        const Operator chan_id = unvec_op(prop * vec_op(identity_op(8)), 8);
        report("adjoint channel unitality",
               (chan_id - identity_op(8)).cwiseAbs().maxCoeff() < 1e-9);
    }
    return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scrambling and decoherence diagnostics for SYK and LMG models"};
    app.require_subcommand(1);

    struct SubDef {
        CLI::App* sub;
        Common common;
    };
    std::map<std::string, SubDef> subs;
    for (const char* name : {"syk-otoc", "syk-mi", "lmg-mi", "bound-check", "tmi",
                             "open-otoc", "decomposition"}) {
        CLI::App* s = app.add_subcommand(name, "");
        subs[name].sub = s;
        add_common(s, subs[name].common);
    }
    subs["syk-otoc"].sub->description("disorder-averaged OTOC for the SYK model");
    subs["syk-mi"].sub->description("mutual information growth for the SYK model");
    subs["lmg-mi"].sub->description("mutual information growth for the LMG model");
    subs["bound-check"].sub->description(
        "verify the information bound; nonzero exit on violation");
    subs["tmi"].sub->description("tripartite mutual information trace");
    subs["open-otoc"].sub->description("bipartite OTOC under open dynamics");
    subs["decomposition"].sub->description("entropy decomposition for the joint model");
    CLI::App* st = app.add_subcommand("selftest", "run the built-in oracle suite");

    int lmg_n = 6;
    std::string lmg_state = "neel";
    subs["lmg-mi"].sub->add_option("--n", lmg_n, "spin count")->capture_default_str();
    subs["lmg-mi"].sub->add_option("--state", lmg_state, "initial state")
        ->check(CLI::IsMember({"all_up", "neel"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help/usage text
        return code == 0 ? 0 : 1;
    }

    try {
        if (st->parsed()) return selftest();

        auto dispatch = [&](const std::string& name, const ExperimentConfig& fallback,
                            std::vector<double> default_gammas,
                            Diagnostic primary) -> int {
            const SubDef& d = subs.at(name);
            ExperimentConfig cfg = base_config(d.sub, d.common, fallback);
            cfg.diagnostics.insert(primary);
            const std::vector<double>& gammas =
                d.common.gammas.empty() ? default_gammas : d.common.gammas;
            run_levels(name, cfg, gammas, d.common, resolve_threads(d.sub, d.common));
            return 0;
        };

        if (subs["syk-otoc"].sub->parsed())
            return dispatch("syk-otoc", syk_default(12, {Diagnostic::otoc_avg}),
                            {0.0, 0.05, 1.0}, Diagnostic::otoc_avg);
        if (subs["syk-mi"].sub->parsed())
            return dispatch("syk-mi", syk_default(12, {Diagnostic::mutual_info}),
                            {0.0, 0.05, 1.0}, Diagnostic::mutual_info);
        if (subs["lmg-mi"].sub->parsed()) {
            ExperimentConfig fallback;
            LmgSpec l;
            l.n_spins = lmg_n;
            fallback.model = l;
            fallback.initial_state =
                lmg_state == "neel" ? InitialState::neel : InitialState::all_up;
            fallback.diagnostics = {Diagnostic::mutual_info};
            return dispatch("lmg-mi", fallback, {0.0}, Diagnostic::mutual_info);
        }
        if (subs["tmi"].sub->parsed())
            return dispatch("tmi", syk_default(12, {Diagnostic::tmi}), {0.0},
                            Diagnostic::tmi);
        if (subs["open-otoc"].sub->parsed())
            return dispatch("open-otoc", syk_default(8, {Diagnostic::open_otoc}),
                            {0.0, 0.05, 1.0}, Diagnostic::open_otoc);
        if (subs["decomposition"].sub->parsed())
            return dispatch("decomposition", syk_default(6, {Diagnostic::decomposition}),
                            {0.1, 0.5, 1.0}, Diagnostic::decomposition);
        if (subs["bound-check"].sub->parsed())
            return cmd_bound_check(subs["bound-check"].sub, subs["bound-check"].common);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return 2;
    }
    return 0;
}
