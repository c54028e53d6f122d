#include "scramble/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "scramble/diagnostics.hpp"
#include "scramble/rng.hpp"

namespace scramble {

std::vector<double> TimeGrid::times() const {
    std::vector<double> ts(n_points);
    for (int j = 0; j < n_points; ++j)
        ts[j] = t_max * static_cast<double>(j) / static_cast<double>(n_points - 1);
    return ts;
}

void TimeGrid::validate() const {
    if (n_points < 2) throw std::invalid_argument("time grid needs n_points >= 2");
    if (t_max <= 0) throw std::invalid_argument("t_max must be positive");
}

int ExperimentConfig::n_qubits() const {
    if (const SykSpec* s = std::get_if<SykSpec>(&model)) return s->n_qubits();
    return std::get<LmgSpec>(model).n_spins;
}

void ExperimentConfig::validate() const {
    if (const SykSpec* s = std::get_if<SykSpec>(&model)) s->validate();
    else std::get<LmgSpec>(model).validate();
    grid.validate();
    if (n_realizations < 1) throw std::invalid_argument("n_realizations must be >= 1");
    if (gamma_over_j < 0) throw std::invalid_argument("gamma_over_j must be non-negative");
    if (initial_state == InitialState::neel && n_qubits() < 2)
        throw std::invalid_argument("Neel state needs at least two qubits");

    const int n = n_qubits();
    SubsystemMask a(partition_a);
    SubsystemMask b = partition_b.empty() ? a.complement(n) : SubsystemMask(partition_b);
    if (!a.disjoint_from(b)) throw std::invalid_argument("partition_a and partition_b overlap");
    for (int q : a.indices())
        if (q >= n) throw std::invalid_argument("partition_a index out of range");
    for (int q : b.indices())
        if (q >= n) throw std::invalid_argument("partition_b index out of range");
    if (diagnostics.count(Diagnostic::tmi)) {
        SubsystemMask ab = SubsystemMask::merge(a, b);
        SubsystemMask c = partition_c.empty() ? ab.complement(n) : SubsystemMask(partition_c);
        if (!c.disjoint_from(a) || !c.disjoint_from(b))
            throw std::invalid_argument("partition_c overlaps partition_a or partition_b");
        for (int q : c.indices())
            if (q >= n) throw std::invalid_argument("partition_c index out of range");
    }
    if (diagnostics.count(Diagnostic::bound) && decoherence && gamma_over_j > 0)
        throw std::invalid_argument("bound diagnostic requires closed dynamics");
    if (diagnostics.count(Diagnostic::decomposition) && 2 * n > kMaxQubits)
        throw std::invalid_argument("decomposition joint model exceeds 12 qubits");
    if (otoc_ob_samples < -1) throw std::invalid_argument("otoc_ob_samples must be >= -1");
}

uint64_t realization_seed(uint64_t master_seed, uint64_t index) {
    return splitmix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15ull);
}

namespace {

Operator build_model_hamiltonian(const ExperimentConfig& config, uint64_t seed) {
    if (const SykSpec* s = std::get_if<SykSpec>(&config.model)) {
        SykSpec spec = *s;
        spec.seed = seed;
        return build_syk(spec, sample_syk_couplings(spec));
    }
    return build_lmg(std::get<LmgSpec>(config.model));
}

void append_trace(TimeSeries& ts, const std::string& name, std::vector<double> mean,
                  std::vector<double> err) {
    Trace tr;
    tr.mean = std::move(mean);
    tr.stderr = std::move(err);
    tr.n = 1;
    ts.traces.emplace(name, std::move(tr));
}

}  // namespace

TimeSeries run_realization(const ExperimentConfig& config, int index) {
    config.validate();
    const int n = config.n_qubits();
    const uint64_t seed = realization_seed(config.master_seed, index);
    const Operator h = build_model_hamiltonian(config, seed);
    const DensityMatrix rho0 =
        config.initial_state == InitialState::all_up ? all_up_state(n) : neel_state(n);

    const double gamma = config.decoherence ? config.gamma_over_j : 0.0;
    const DecoherenceBasis basis = config.decoherence.value_or(DecoherenceBasis::energy);
    const DephasingPropagator prop(h, basis, gamma, n);

    const SubsystemMask mask_a{config.partition_a};
    const SubsystemMask mask_b = config.partition_b.empty()
                                     ? mask_a.complement(n)
                                     : SubsystemMask(config.partition_b);

    TimeSeries out;
    out.times = config.grid.times();
    const std::vector<double>& times = out.times;

    if (config.diagnostics.count(Diagnostic::otoc_avg)) {
        AveragedOtocTraceOptions opts;
        opts.include_identity = config.include_identity;
        opts.ob_samples = config.otoc_ob_samples == -1
                              ? (mask_b.size() <= 3 ? 0 : 256)
                              : config.otoc_ob_samples;
        opts.sample_seed = splitmix64(seed ^ 0x07c0c5eed5a117e5ull);
        TraceWithError tr = averaged_otoc_trace(rho0, mask_a, mask_b, prop, times, opts);
        std::vector<double> one_minus(tr.mean.size());
        for (size_t j = 0; j < tr.mean.size(); ++j) one_minus[j] = 1.0 - tr.mean[j];
        append_trace(out, "one_minus_otoc_avg", std::move(one_minus), tr.stderr);
        append_trace(out, "otoc_avg", std::move(tr.mean), std::move(tr.stderr));
    }

    const bool need_state = config.diagnostics.count(Diagnostic::mutual_info) ||
                            config.diagnostics.count(Diagnostic::tmi) ||
                            config.diagnostics.count(Diagnostic::bound);
    if (need_state) {
        std::vector<double> mi_trace, tmi_trace;
        std::optional<SubsystemMask> mask_c;
        if (config.diagnostics.count(Diagnostic::tmi)) {
            const SubsystemMask ab = SubsystemMask::merge(mask_a, mask_b);
            mask_c = config.partition_c.empty() ? ab.complement(n)
                                                : SubsystemMask(config.partition_c);
        }
        Operator rho = rho0.mat;
        double prev_t = 0.0;
        for (double t : times) {
            if (t - prev_t > 1e-12) prop.step_state(rho, t - prev_t);
            prev_t = t;
            const DensityMatrix state = DensityMatrix::unchecked(0.5 * (rho + rho.adjoint()));
            if (config.diagnostics.count(Diagnostic::mutual_info) ||
                config.diagnostics.count(Diagnostic::bound))
                mi_trace.push_back(mutual_information(state, mask_a, mask_b));
            if (mask_c)
                tmi_trace.push_back(tripartite_mutual_information(state, mask_a, mask_b, *mask_c));
        }
        if (config.diagnostics.count(Diagnostic::mutual_info))
            append_trace(out, "mutual_info", mi_trace, std::vector<double>(times.size(), 0.0));
        if (mask_c)
            append_trace(out, "tmi", std::move(tmi_trace),
                         std::vector<double>(times.size(), 0.0));

        if (config.diagnostics.count(Diagnostic::bound)) {
            AveragedOtocTraceOptions opts;
            opts.include_identity = config.include_identity;
            opts.ob_samples = 0;  // the bound is only meaningful with the exact average
            const DephasingPropagator closed(h, DecoherenceBasis::energy, 0.0, n);
            TraceWithError obar = averaged_otoc_trace(rho0, mask_a, mask_b, closed, times, opts);
            const double obar0 =
                times.front() == 0.0
                    ? obar.mean.front()
                    : pauli_averaged_otoc(rho0, mask_a, mask_b, h, 0.0).value;
            std::vector<double> residual(times.size());
            for (size_t j = 0; j < times.size(); ++j)
                residual[j] = mi_trace[j] - (obar0 - obar.mean[j]);
            append_trace(out, "bound_residual", std::move(residual),
                         std::vector<double>(times.size(), 0.0));
        }
    }

    if (config.diagnostics.count(Diagnostic::open_otoc)) {
        LindbladSpec spec;
        spec.hamiltonian = h;
        spec.gamma = gamma;
        if (config.decoherence && gamma > 0)
            spec.jump_ops = dephasing_jumps(*config.decoherence, h, n);
        std::vector<double> vals(times.size()), errs(times.size());
        for (size_t j = 0; j < times.size(); ++j) {
            PauliAverageOptions opts;
            opts.include_identity = config.include_identity;
            opts.sample_seed = splitmix64(seed ^ 0x0be57a7e5eed0123ull);
            const PauliAverage pa = open_bipartite_otoc(spec, mask_a, mask_b, times[j], opts);
            vals[j] = pa.value;
            errs[j] = pa.stderr;
        }
        append_trace(out, "open_otoc", std::move(vals), std::move(errs));
    }

    if (config.diagnostics.count(Diagnostic::decomposition)) {
        const JointModel joint = build_joint_dephasing_model(n, h, config.gamma_over_j);
        std::vector<double> mi_se(times.size()), ds_ex(times.size()), d_env(times.size()),
            ds_sys(times.size());
        for (size_t j = 0; j < times.size(); ++j) {
            const DecompositionRecord rec = entropy_decomposition(joint, rho0, times[j]);
            mi_se[j] = rec.mutual_info_SE;
            ds_ex[j] = rec.delta_s_exchange;
            d_env[j] = rec.rel_entropy_env;
            ds_sys[j] = rec.delta_s_system;
        }
        const std::vector<double> zeros(times.size(), 0.0);
        append_trace(out, "mutual_info_SE", std::move(mi_se), zeros);
        append_trace(out, "delta_s_exchange", std::move(ds_ex), zeros);
        append_trace(out, "rel_entropy_env", std::move(d_env), zeros);
        append_trace(out, "delta_s_system", std::move(ds_sys), zeros);
    }

    return out;
}

EnsembleResult run_ensemble(const ExperimentConfig& config, int n_threads) {
    config.validate();
    const int m = config.n_realizations;
    if (n_threads <= 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, m);

    std::vector<std::optional<TimeSeries>> results(m);
    std::vector<std::string> errors(m);
    std::atomic<int> next{0};

    auto worker = [&] {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= m) break;
            try {
                results[i] = run_realization(config, i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    EnsembleResult out;
    for (int i = 0; i < m; ++i)
        if (!results[i]) out.failures.push_back({i, errors[i]});

    int n_ok = 0;
    for (int i = 0; i < m; ++i) {
        if (!results[i]) continue;
        const TimeSeries& ts = *results[i];
        if (n_ok == 0) {
            out.series.times = ts.times;
            for (const auto& [name, tr] : ts.traces) {
                Trace agg;
                agg.mean.assign(ts.times.size(), 0.0);
                agg.stderr.assign(ts.times.size(), 0.0);
                out.series.traces.emplace(name, std::move(agg));
            }
        }
        ++n_ok;
    }
    if (n_ok == 0) return out;

    // mean, then scatter, accumulated in realization-index order
    for (auto& [name, agg] : out.series.traces) {
        for (int i = 0; i < m; ++i) {
            if (!results[i]) continue;
            const std::vector<double>& v = results[i]->traces.at(name).mean;
            for (size_t j = 0; j < agg.mean.size(); ++j) agg.mean[j] += v[j];
        }
        for (double& x : agg.mean) x /= n_ok;
        if (n_ok > 1) {
            for (int i = 0; i < m; ++i) {
                if (!results[i]) continue;
                const std::vector<double>& v = results[i]->traces.at(name).mean;
                for (size_t j = 0; j < agg.mean.size(); ++j) {
                    const double d = v[j] - agg.mean[j];
                    agg.stderr[j] += d * d;
                }
            }
            for (double& x : agg.stderr)
                x = std::sqrt(x / (static_cast<double>(n_ok) * (n_ok - 1.0)));
        }
        agg.n = n_ok;
    }
    return out;
}

}  // namespace scramble
