#include "scramble/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unsupported/Eigen/MatrixFunctions>

#include "scramble/rng.hpp"

namespace scramble {

namespace {

void check_same_dim(Eigen::Index a, Eigen::Index b) {
    if (a != b) throw std::invalid_argument("dimension mismatch");
}

// O_B(t) = e^{iHt} O_B e^{-iHt}
Operator heisenberg_closed(const Operator& w, const Operator& u_forward) {
    return u_forward.adjoint() * w * u_forward;
}

PauliString pauli_from_code(const SubsystemMask& support, int n_qubits, uint64_t code) {
    PauliString p;
    p.letters.assign(n_qubits, PauliLetter::I);
    const int k = support.size();
    for (int j = k - 1; j >= 0; --j) {
        p.letters[support.indices()[j]] = static_cast<PauliLetter>(code & 3);
        code >>= 2;
    }
    return p;
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double stderr_of(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double m = static_cast<double>(xs.size());
    return std::sqrt(ss / (m * (m - 1.0)));
}

}  // namespace

cplx otoc(const DensityMatrix& rho, const Operator& w, const Operator& v, const Operator& h,
          double t) {
    check_same_dim(rho.dim(), w.rows());
    check_same_dim(rho.dim(), v.rows());
    check_same_dim(rho.dim(), h.rows());
    const Operator u = unitary_exp(h, t);
    const Operator wt = heisenberg_closed(w, u);
    return (rho.mat * wt.adjoint() * v.adjoint() * wt * v).trace();
}

double squared_commutator(const DensityMatrix& rho, const Operator& w, const Operator& v,
                          const Operator& h, double t) {
    check_same_dim(rho.dim(), w.rows());
    check_same_dim(rho.dim(), v.rows());
    const Operator u = unitary_exp(h, t);
    const Operator wt_dag = heisenberg_closed(w, u).adjoint();
    const Operator comm = wt_dag * v - v * wt_dag;
    return (rho.mat * comm.adjoint() * comm).trace().real();
}

PauliAverage pauli_averaged_otoc(const DensityMatrix& rho, const SubsystemMask& support_a,
                                 const SubsystemMask& support_b, const Operator& h, double t,
                                 const PauliAverageOptions& opts) {
    if (!support_a.disjoint_from(support_b))
        throw std::invalid_argument("operator supports overlap");
    const int n = rho.n_qubits();
    check_same_dim(rho.dim(), h.rows());
    const Operator u = unitary_exp(h, t);

    const uint64_t size_a = uint64_t{1} << (2 * support_a.size());
    const uint64_t size_b = uint64_t{1} << (2 * support_b.size());
    const uint64_t lo = opts.include_identity ? 0 : 1;
    const double total_pairs =
        static_cast<double>(size_a - lo) * static_cast<double>(size_b - lo);

    PauliAverage out;
    if (total_pairs <= static_cast<double>(opts.max_exact_pairs)) {
        const auto ops_a = enumerate_pauli_group(support_a, n, opts.include_identity);
        const auto ops_b = enumerate_pauli_group(support_b, n, opts.include_identity);
        double acc = 0.0;
        for (const Operator& ob : ops_b) {
            const Operator m = heisenberg_closed(ob, u);
            for (const Operator& oa : ops_a) {
                const Operator q = oa * m * oa;
                acc += (rho.mat * q * m).trace().real();
            }
        }
        out.value = acc / total_pairs;
        out.n_pairs = static_cast<long>(total_pairs);
        out.exact = true;
        return out;
    }

    CounterRng rng(opts.sample_seed);
    std::vector<double> samples;
    samples.reserve(opts.sample_pairs);
    for (long s = 0; s < opts.sample_pairs; ++s) {
        const uint64_t ca = lo + rng.next_u64() % (size_a - lo);
        const uint64_t cb = lo + rng.next_u64() % (size_b - lo);
        const Operator oa = pauli_matrix(pauli_from_code(support_a, n, ca));
        const Operator ob = pauli_matrix(pauli_from_code(support_b, n, cb));
        const Operator m = heisenberg_closed(ob, u);
        samples.push_back((rho.mat * oa * m * oa * m).trace().real());
    }
    out.value = mean_of(samples);
    out.stderr = stderr_of(samples, out.value);
    out.n_pairs = opts.sample_pairs;
    out.exact = false;
    return out;
}

double mutual_information(const DensityMatrix& rho, const SubsystemMask& part_a,
                          const SubsystemMask& part_b) {
    if (!part_a.disjoint_from(part_b)) throw std::invalid_argument("partitions overlap");
    const int n = rho.n_qubits();
    const SubsystemMask ab = SubsystemMask::merge(part_a, part_b);
    const double s_a = von_neumann_entropy(partial_trace(rho, part_a));
    const double s_b = von_neumann_entropy(partial_trace(rho, part_b));
    const double s_ab = (ab.size() == n) ? von_neumann_entropy(rho)
                                         : von_neumann_entropy(partial_trace(rho, ab));
    return s_a + s_b - s_ab;
}

double bound_residual(const DensityMatrix& rho0, const SubsystemMask& part_a,
                      const SubsystemMask& part_b, const Operator& h, double t) {
    const DensityMatrix rho_t = evolve_unitary(rho0, h, t);
    const double mi = mutual_information(rho_t, part_a, part_b);
    const double obar_0 = pauli_averaged_otoc(rho0, part_a, part_b, h, 0.0).value;
    const double obar_t = pauli_averaged_otoc(rho0, part_a, part_b, h, t).value;
    return mi - (obar_0 - obar_t);
}

double tripartite_mutual_information(const DensityMatrix& rho, const SubsystemMask& a,
                                     const SubsystemMask& b, const SubsystemMask& c) {
    if (!a.disjoint_from(b) || !a.disjoint_from(c) || !b.disjoint_from(c))
        throw std::invalid_argument("partitions overlap");
    return mutual_information(rho, a, b) + mutual_information(rho, a, c) -
           mutual_information(rho, a, SubsystemMask::merge(b, c));
}

PauliAverage open_bipartite_otoc(const LindbladSpec& spec, const SubsystemMask& support_a,
                                 const SubsystemMask& support_b, double t,
                                 const PauliAverageOptions& opts) {
    if (!support_a.disjoint_from(support_b))
        throw std::invalid_argument("operator supports overlap");
    spec.validate();
    const Eigen::Index d = spec.dim();
    const int n = qubit_count(d);

    const Operator prop = (liouvillian(spec).adjoint() * t).exp();
    const Operator chan_id = unvec_op(prop * vec_op(identity_op(d)), d);
    if ((chan_id - identity_op(d)).cwiseAbs().maxCoeff() > 1e-8)
        throw std::runtime_error("contract violation: adjoint channel is not unital");

    auto evolve = [&](const Operator& v) { return unvec_op(prop * vec_op(v), d); };
    auto comm_norm_sq = [&](const Operator& ev, const Operator& wb) {
        const Operator comm = ev * wb - wb * ev;
        return comm.squaredNorm() / (2.0 * static_cast<double>(d));
    };

    const uint64_t size_a = uint64_t{1} << (2 * support_a.size());
    const uint64_t size_b = uint64_t{1} << (2 * support_b.size());
    const uint64_t lo = opts.include_identity ? 0 : 1;
    const double total_pairs =
        static_cast<double>(size_a - lo) * static_cast<double>(size_b - lo);

    PauliAverage out;
    if (total_pairs <= static_cast<double>(opts.max_exact_pairs)) {
        const auto ops_a = enumerate_pauli_group(support_a, n, opts.include_identity);
        const auto ops_b = enumerate_pauli_group(support_b, n, opts.include_identity);
        double acc = 0.0;
        for (const Operator& va : ops_a) {
            const Operator ev = evolve(va);
            for (const Operator& wb : ops_b) acc += comm_norm_sq(ev, wb);
        }
        out.value = acc / total_pairs;
        out.n_pairs = static_cast<long>(total_pairs);
        out.exact = true;
        return out;
    }

    CounterRng rng(opts.sample_seed);
    std::vector<double> samples;
    samples.reserve(opts.sample_pairs);
    for (long s = 0; s < opts.sample_pairs; ++s) {
        const uint64_t ca = lo + rng.next_u64() % (size_a - lo);
        const uint64_t cb = lo + rng.next_u64() % (size_b - lo);
        const Operator ev = evolve(pauli_matrix(pauli_from_code(support_a, n, ca)));
        const Operator wb = pauli_matrix(pauli_from_code(support_b, n, cb));
        samples.push_back(comm_norm_sq(ev, wb));
    }
    out.value = mean_of(samples);
    out.stderr = stderr_of(samples, out.value);
    out.n_pairs = opts.sample_pairs;
    out.exact = false;
    return out;
}

std::vector<WingflapOutcome> wingflap_distribution(const DensityMatrix& rho, const Operator& o,
                                                   const Operator& w, const Operator& h,
                                                   double tau) {
    check_same_dim(rho.dim(), o.rows());
    check_same_dim(rho.dim(), w.rows());
    const Spectrum so = eig_hermitian(o);  // throws on non-Hermitian o
    const Eigen::Index d = rho.dim();
    if ((w.adjoint() * w - identity_op(d)).cwiseAbs().maxCoeff() > 1e-8)
        std::fprintf(stderr, "wingflap: perturbation W is not unitary\n");

    // e^{iH tau} W e^{-iH tau}, expressed in the O eigenbasis
    const Operator u = unitary_exp(h, tau);
    const Operator b = so.eigenvectors.adjoint() * (u.adjoint() * w * u) * so.eigenvectors;
    const Operator rho_o = so.eigenvectors.adjoint() * rho.mat * so.eigenvectors;

    std::vector<WingflapOutcome> raw;
    for (Eigen::Index nn = 0; nn < d; ++nn) {
        const double pn = rho_o(nn, nn).real();
        if (pn <= 0.0) continue;
        for (Eigen::Index mm = 0; mm < d; ++mm) {
            const double amp = std::norm(b(mm, nn));
            if (amp * pn <= 0.0) continue;
            raw.push_back({so.eigenvalues(mm) - so.eigenvalues(nn), amp * pn});
        }
    }
    std::sort(raw.begin(), raw.end(),
              [](const WingflapOutcome& x, const WingflapOutcome& y) { return x.delta < y.delta; });

    std::vector<WingflapOutcome> out;
    for (const WingflapOutcome& r : raw) {
        if (!out.empty() && r.delta - out.back().delta < 1e-9) {
            out.back().probability += r.probability;
        } else {
            out.push_back(r);
        }
    }
    return out;
}

cplx characteristic_function(const std::vector<WingflapOutcome>& dist, double u) {
    cplx g = 0.0;
    for (const WingflapOutcome& o : dist) g += o.probability * std::exp(cplx(0.0, u * o.delta));
    return g;
}

DecompositionRecord entropy_decomposition(const JointModel& model, const DensityMatrix& rho_sys0,
                                          double t) {
    const int n_sys = model.n_sys;
    const int n_total = n_sys + model.n_env;
    std::vector<int> sys_idx(n_sys), env_idx(model.n_env);
    for (int k = 0; k < n_sys; ++k) sys_idx[k] = k;
    for (int k = 0; k < model.n_env; ++k) env_idx[k] = n_sys + k;
    const SubsystemMask sys_mask(sys_idx), env_mask(env_idx);

    const DensityMatrix joint = evolve_joint(model, rho_sys0, t);
    const DensityMatrix rho_s = partial_trace(joint, sys_mask);
    const DensityMatrix rho_e = partial_trace(joint, env_mask);
    const DensityMatrix& eq = model.env_equilibrium;

    DecompositionRecord rec;
    rec.time = t;
    rec.mutual_info_SE = von_neumann_entropy(rho_s) + von_neumann_entropy(rho_e) -
                         von_neumann_entropy(joint);
    rec.rel_entropy_env = relative_entropy(rho_e, eq);
    rec.delta_s_system = von_neumann_entropy(rho_s) - von_neumann_entropy(rho_sys0);

    // tr[(rho_E(t) - rho_E^eq) ln rho_E^eq]
    const Spectrum seq = eig_hermitian(eq.mat);
    double ex = 0.0;
    for (Eigen::Index j = 0; j < seq.eigenvalues.size(); ++j) {
        const double mu = seq.eigenvalues(j);
        if (mu <= 1e-12) continue;
        const double wt =
            (seq.eigenvectors.col(j).adjoint() * rho_e.mat * seq.eigenvectors.col(j))(0).real();
        ex += (wt - mu) * std::log(mu);
    }
    rec.delta_s_exchange = ex;
    return rec;
}

TraceWithError averaged_otoc_trace(const DensityMatrix& rho0, const SubsystemMask& support_a,
                                   const SubsystemMask& support_b,
                                   const DephasingPropagator& prop,
                                   const std::vector<double>& times,
                                   const AveragedOtocTraceOptions& opts) {
    if (!support_a.disjoint_from(support_b))
        throw std::invalid_argument("operator supports overlap");
    const int n = rho0.n_qubits();
    const SubsystemMask rest = support_a.complement(n);
    const double dim_a = static_cast<double>(Eigen::Index{1} << support_a.size());
    const double group_a = std::pow(4.0, support_a.size());

    // Exact Pauli-twirl average over O_A: E[O_A M O_A] = Tr_A(M)/2^|A| (x) I_A.
    auto twirl_a = [&](const Operator& m) {
        Operator phi = embed_on_subsystem(partial_trace_matrix(m, rest) / dim_a, rest, n);
        if (!opts.include_identity) phi = (group_a * phi - m) / (group_a - 1.0);
        return phi;
    };

    const uint64_t size_b = uint64_t{1} << (2 * support_b.size());
    const uint64_t lo = opts.include_identity ? 0 : 1;

    std::vector<Operator> obs;
    if (opts.ob_samples == 0) {
        for (uint64_t code = lo; code < size_b; ++code)
            obs.push_back(pauli_matrix(pauli_from_code(support_b, n, code)));
    } else {
        CounterRng rng(opts.sample_seed);
        for (int s = 0; s < opts.ob_samples; ++s) {
            const uint64_t code = lo + rng.next_u64() % (size_b - lo);
            obs.push_back(pauli_matrix(pauli_from_code(support_b, n, code)));
        }
    }

    TraceWithError out;
    out.mean.resize(times.size());
    out.stderr.resize(times.size());
    std::vector<double> vals(obs.size());

    if (prop.energy_mode()) {
        // The energy-mode channel is diagonal in the eigenbasis: each O_B is
        // transformed once and then propagated to any time by one elementwise
        // product, with no accumulation of stepping error.
        const Operator& v = prop.energy_eigvecs();
        std::vector<Operator> obs_eig(obs.size());
        for (size_t k = 0; k < obs.size(); ++k) obs_eig[k] = v.adjoint() * obs[k] * v;
        const Operator rho_tr = rho0.mat.transpose();
        double prev = 0.0;
        for (size_t j = 0; j < times.size(); ++j) {
            if (times[j] - prev < -1e-12)
                throw std::invalid_argument("time grid must be ascending");
            prev = times[j];
            const Eigen::MatrixXcd f = prop.adjoint_factor(times[j]);
            for (size_t k = 0; k < obs.size(); ++k) {
                const Operator bt = v * f.cwiseProduct(obs_eig[k]) * v.adjoint();
                vals[k] = rho_tr.cwiseProduct(twirl_a(bt) * bt).sum().real();
            }
            out.mean[j] = mean_of(vals);
            out.stderr[j] = (opts.ob_samples == 0) ? 0.0 : stderr_of(vals, out.mean[j]);
        }
        return out;
    }

    double prev_t = 0.0;
    for (size_t j = 0; j < times.size(); ++j) {
        const double dt = times[j] - prev_t;
        if (dt < -1e-12) throw std::invalid_argument("time grid must be ascending");
        for (size_t k = 0; k < obs.size(); ++k) {
            if (dt > 1e-12) prop.step_adjoint(obs[k], dt);
            vals[k] = (rho0.mat * twirl_a(obs[k]) * obs[k]).trace().real();
        }
        prev_t = times[j];
        out.mean[j] = mean_of(vals);
        out.stderr[j] = (opts.ob_samples == 0) ? 0.0 : stderr_of(vals, out.mean[j]);
    }
    return out;
}

}  // namespace scramble
