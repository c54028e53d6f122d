#ifndef SCRAMBLE_DIAGNOSTICS_HPP
#define SCRAMBLE_DIAGNOSTICS_HPP

#include <cstdint>
#include <vector>

#include "scramble/core.hpp"
#include "scramble/dynamics.hpp"

namespace scramble {

// F(t) = tr[rho W^dag(t) V^dag W(t) V], W(t) = e^{iHt} W e^{-iHt}.
cplx otoc(const DensityMatrix& rho, const Operator& w, const Operator& v, const Operator& h,
          double t);

// <[W^dag(t), V]^dag [W^dag(t), V]>; equals 2(1 - Re F) for unitary
// Hermitian W, V but is computed from the commutator directly.
double squared_commutator(const DensityMatrix& rho, const Operator& w, const Operator& v,
                          const Operator& h, double t);

struct PauliAverage {
    double value = 0.0;
    double stderr = 0.0;  // 0 for exact enumeration
    long n_pairs = 0;
    bool exact = true;
};

struct PauliAverageOptions {
    bool include_identity = true;
    // Pair budget for the sampled estimator; enumeration is exact while
    // 4^(|A|+|B|) stays within max_exact_pairs.
    long max_exact_pairs = 4096;
    long sample_pairs = 1000;
    uint64_t sample_seed = 0x5ca3f1ed0u;
};

// Mean over O_A, O_B of Re tr[rho O_A O_B(t) O_A O_B(t)] under closed
// dynamics generated by h.
PauliAverage pauli_averaged_otoc(const DensityMatrix& rho, const SubsystemMask& support_a,
                                 const SubsystemMask& support_b, const Operator& h, double t,
                                 const PauliAverageOptions& opts = {});

// S_A + S_B - S_AB of the given state (A, B disjoint).
double mutual_information(const DensityMatrix& rho, const SubsystemMask& part_a,
                          const SubsystemMask& part_b);

// I(t) - [Obar(0) - Obar(t)] under closed evolution of rho0; the bound
// contract is residual >= -1e-9 for all t.
double bound_residual(const DensityMatrix& rho0, const SubsystemMask& part_a,
                      const SubsystemMask& part_b, const Operator& h, double t);

// I(A:B) + I(A:C) - I(A:BC)
double tripartite_mutual_information(const DensityMatrix& rho, const SubsystemMask& a,
                                     const SubsystemMask& b, const SubsystemMask& c);

// (1/2d) mean over Pauli V_A, W_B of ||[E(V_A), W_B]||_2^2 with E the
// adjoint channel of spec at time t. Throws if the adjoint is not
// unital within 1e-8.
PauliAverage open_bipartite_otoc(const LindbladSpec& spec, const SubsystemMask& support_a,
                                 const SubsystemMask& support_b, double t,
                                 const PauliAverageOptions& opts = {});

struct WingflapOutcome {
    double delta = 0.0;        // O_m - O_n
    double probability = 0.0;
};

// Two-point measurement statistics of the forward/kick/backward
// protocol: measure O, evolve with H for tau, apply W, evolve with -H
// for tau, measure O again. The first measurement dephases rho in the
// O eigenbasis.
std::vector<WingflapOutcome> wingflap_distribution(const DensityMatrix& rho, const Operator& o,
                                                   const Operator& w, const Operator& h,
                                                   double tau);

// G(u) = sum_k p_k exp(i u delta_k)
cplx characteristic_function(const std::vector<WingflapOutcome>& dist, double u);

struct DecompositionRecord {
    double time = 0.0;
    double mutual_info_SE = 0.0;
    double delta_s_exchange = 0.0;
    double rel_entropy_env = 0.0;
    double delta_s_system = 0.0;

    double residual() const {
        return mutual_info_SE + delta_s_exchange + rel_entropy_env - delta_s_system;
    }
};

// The three-way split of the system entropy change for the explicit
// system+environment model; residual() is an exact identity up to
// numerics (< 1e-8).
DecompositionRecord entropy_decomposition(const JointModel& model, const DensityMatrix& rho_sys0,
                                          double t);

// --- trajectory helpers used by the ensemble runner ---

struct TraceWithError {
    std::vector<double> mean;
    std::vector<double> stderr;
};

struct AveragedOtocTraceOptions {
    bool include_identity = true;
    // Number of O_B draws; 0 enumerates the full group on B. The O_A
    // average is always evaluated exactly via the Pauli twirl over A.
    int ob_samples = 0;
    uint64_t sample_seed = 0;
};

// Obar(t) on a time grid under the given propagator; O_B evolves through
// the adjoint channel. Equals pauli_averaged_otoc at every grid point
// when ob_samples = 0 and the dynamics are closed.
TraceWithError averaged_otoc_trace(const DensityMatrix& rho0, const SubsystemMask& support_a,
                                   const SubsystemMask& support_b,
                                   const DephasingPropagator& prop,
                                   const std::vector<double>& times,
                                   const AveragedOtocTraceOptions& opts = {});

}  // namespace scramble

#endif
