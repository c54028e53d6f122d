#ifndef SCRAMBLE_CORE_HPP
#define SCRAMBLE_CORE_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Dense Hilbert-space primitives for n-qubit systems (n <= 12).
// Conventions: hbar = 1, energies in units of J, time in units of 1/J.
// Qubit 0 is the leftmost (most significant) tensor factor, so basis
// state |b0 b1 ... b_{n-1}> has index b0*2^{n-1} + ... + b_{n-1}.
namespace scramble {

using Operator = Eigen::MatrixXcd;
using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 12;

// Number of qubits for a power-of-two dimension; throws otherwise.
int qubit_count(Eigen::Index dim);

bool is_hermitian(const Operator& m, double tol = 1e-12);

Operator identity_op(Eigen::Index dim);

// Kronecker product; a's indices are the more significant ones.
Operator tensor_product(const Operator& a, const Operator& b);

// Sorted, distinct, non-empty qubit indices naming a subsystem.
class SubsystemMask {
  public:
    explicit SubsystemMask(std::vector<int> indices);

    const std::vector<int>& indices() const { return indices_; }
    int size() const { return static_cast<int>(indices_.size()); }
    bool contains(int q) const;
    bool disjoint_from(const SubsystemMask& other) const;
    // Indices in [0, n) not present in this mask; throws if empty.
    SubsystemMask complement(int n_qubits) const;
    static SubsystemMask merge(const SubsystemMask& a, const SubsystemMask& b);

  private:
    std::vector<int> indices_;
};

// Hermitian, unit-trace, positive-semidefinite operator.
struct DensityMatrix {
    Operator mat;

    // Validates trace (1e-9), Hermiticity (1e-12), min eigenvalue (>= -1e-9).
    static DensityMatrix checked(Operator m);
    // No validation; for intermediate results already known valid.
    static DensityMatrix unchecked(Operator m);

    Eigen::Index dim() const { return mat.rows(); }
    int n_qubits() const { return qubit_count(mat.rows()); }
};

DensityMatrix pure_state(const Eigen::VectorXcd& psi);

// Reduced density matrix on the kept qubits (indices in the original
// labeling; the result orders them as listed in `keep`).
DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemMask& keep);

// Same contraction for an arbitrary (not necessarily unit-trace) matrix.
Operator partial_trace_matrix(const Operator& m, const SubsystemMask& keep);

// Operator acting on the qubits in `on` (in mask order), identity on the
// rest, materialized on n_qubits.
Operator embed_on_subsystem(const Operator& op, const SubsystemMask& on, int n_qubits);

struct Spectrum {
    Eigen::VectorXd eigenvalues;  // ascending
    Operator eigenvectors;        // unitary, columns match eigenvalues
};

// Hermitian eigendecomposition; input must be Hermitian within 1e-10.
Spectrum eig_hermitian(const Operator& h);

// e^{-i h t} via eigendecomposition of the Hermitian h.
Operator unitary_exp(const Operator& h, double t);

// -sum lambda ln lambda in nats; eigenvalues below 1e-12 contribute 0.
double von_neumann_entropy(const DensityMatrix& rho);

// tr[rho (ln rho - ln sigma)]; +infinity when rho has support outside
// sigma's support.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

enum class PauliLetter : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

struct PauliString {
    std::vector<PauliLetter> letters;  // one per qubit, index 0 leftmost

    static PauliString from_text(const std::string& s);
    std::string text() const;
    int n_qubits() const { return static_cast<int>(letters.size()); }
};

const Operator& pauli_I();
const Operator& pauli_X();
const Operator& pauli_Y();
const Operator& pauli_Z();

Operator pauli_matrix(const PauliString& p);

// Single-qubit operator `m` embedded at `qubit` of an n-qubit register.
Operator embed_single_qubit(const Operator& m, int qubit, int n_qubits);

// All Pauli strings supported on `support`, as n-qubit strings with I
// elsewhere. Enumeration order: base-4 counter over support qubits, the
// last support qubit varying fastest, digit order I,X,Y,Z. The identity
// string comes first; set include_identity = false to drop it.
std::vector<PauliString> enumerate_pauli_strings(const SubsystemMask& support,
                                                 int n_qubits,
                                                 bool include_identity = true);

std::vector<Operator> enumerate_pauli_group(const SubsystemMask& support,
                                            int n_qubits,
                                            bool include_identity = true);

}  // namespace scramble

#endif
