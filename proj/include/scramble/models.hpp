#ifndef SCRAMBLE_MODELS_HPP
#define SCRAMBLE_MODELS_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "scramble/core.hpp"

namespace scramble {

// All-to-all random q-body Majorana model on N/2 qubits.
struct SykSpec {
    int n_majorana = 12;    // N, even, >= 4
    int q = 4;              // even, >= 2, <= N
    double j_scale = 1.0;   // J
    uint64_t seed = 0;

    void validate() const;
    int n_qubits() const { return n_majorana / 2; }
};

// Couplings keyed by strictly increasing Majorana index tuples (1-based).
struct SykCouplings {
    std::map<std::vector<int>, double> values;
};

// Collective XX+YY model with a transverse field.
struct LmgSpec {
    int n_spins = 6;       // N >= 2
    double j_scale = 1.0;  // J

    void validate() const;
};

// Jordan-Wigner Majorana operator psi_i on N/2 qubits, 1 <= i <= N.
// Normalization {psi_i, psi_j} = delta_ij, so psi_i^2 = 1/2.
Operator majorana(int i, int n_majorana);

// I.i.d. Gaussian couplings, mean 0, variance J^2 (q-1)! / N^(q-1).
// Deterministic for a fixed spec.seed; tuples are drawn in lexicographic
// order from a counter-based stream.
SykCouplings sample_syk_couplings(const SykSpec& spec);

// H = i^{q/2} sum_{i1<...<iq} J_{i1..iq} psi_i1 ... psi_iq
Operator build_syk(const SykSpec& spec, const SykCouplings& couplings);

// H = -(J/N) sum_{i<j} (X_i X_j + Y_i Y_j) - sum_i Z_i
Operator build_lmg(const LmgSpec& spec);

// |0...0><0...0|
DensityMatrix all_up_state(int n_qubits);

// |0101...><0101...| with qubit 0 in |0>.
DensityMatrix neel_state(int n_qubits);

}  // namespace scramble

#endif
