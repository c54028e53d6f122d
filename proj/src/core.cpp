#include "scramble/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scramble {

int qubit_count(Eigen::Index dim) {
    if (dim < 2) throw std::invalid_argument("dimension must be at least 2");
    int n = 0;
    Eigen::Index d = dim;
    while (d > 1) {
        if (d % 2 != 0) throw std::invalid_argument("dimension is not a power of 2");
        d /= 2;
        ++n;
    }
    if (n > kMaxQubits) throw std::invalid_argument("system exceeds 12 qubits");
    return n;
}

bool is_hermitian(const Operator& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() < tol;
}

Operator identity_op(Eigen::Index dim) { return Operator::Identity(dim, dim); }

Operator tensor_product(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

SubsystemMask::SubsystemMask(std::vector<int> indices) : indices_(std::move(indices)) {
    if (indices_.empty()) throw std::invalid_argument("subsystem mask must be non-empty");
    for (size_t k = 0; k < indices_.size(); ++k) {
        if (indices_[k] < 0) throw std::invalid_argument("negative qubit index");
        if (k > 0 && indices_[k] <= indices_[k - 1])
            throw std::invalid_argument("qubit indices must be strictly increasing");
    }
}

bool SubsystemMask::contains(int q) const {
    return std::binary_search(indices_.begin(), indices_.end(), q);
}

bool SubsystemMask::disjoint_from(const SubsystemMask& other) const {
    for (int q : other.indices_)
        if (contains(q)) return false;
    return true;
}

SubsystemMask SubsystemMask::complement(int n_qubits) const {
    std::vector<int> rest;
    for (int q = 0; q < n_qubits; ++q)
        if (!contains(q)) rest.push_back(q);
    return SubsystemMask(std::move(rest));
}

SubsystemMask SubsystemMask::merge(const SubsystemMask& a, const SubsystemMask& b) {
    std::vector<int> all(a.indices_);
    all.insert(all.end(), b.indices_.begin(), b.indices_.end());
    std::sort(all.begin(), all.end());
    return SubsystemMask(std::move(all));
}

DensityMatrix DensityMatrix::checked(Operator m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("density matrix must be square");
    qubit_count(m.rows());
    if (std::abs(m.trace().real() - 1.0) > 1e-9 || std::abs(m.trace().imag()) > 1e-9)
        throw std::invalid_argument("density matrix trace differs from 1");
    if (!is_hermitian(m, 1e-12)) throw std::invalid_argument("density matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Operator> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    return DensityMatrix{std::move(m)};
}

DensityMatrix DensityMatrix::unchecked(Operator m) { return DensityMatrix{std::move(m)}; }

DensityMatrix pure_state(const Eigen::VectorXcd& psi) {
    double norm = psi.norm();
    Eigen::VectorXcd v = psi / norm;
    return DensityMatrix::unchecked(v * v.adjoint());
}

namespace {

// Splits a full basis index into (kept, traced) sub-indices given the
// bit positions of the kept qubits (qubit 0 = most significant bit).
struct BitSplit {
    std::vector<int> keep_shift;   // shift of each kept qubit in the full index
    std::vector<int> trace_shift;  // shift of each traced qubit
};

BitSplit make_split(int n, const SubsystemMask& keep) {
    BitSplit s;
    for (int q : keep.indices()) {
        if (q >= n) throw std::out_of_range("kept qubit index out of range");
        s.keep_shift.push_back(n - 1 - q);
    }
    for (int q = 0; q < n; ++q)
        if (!keep.contains(q)) s.trace_shift.push_back(n - 1 - q);
    return s;
}

Eigen::Index compose_index(Eigen::Index sub, const std::vector<int>& shifts) {
    Eigen::Index full = 0;
    const int m = static_cast<int>(shifts.size());
    for (int k = 0; k < m; ++k)
        if ((sub >> (m - 1 - k)) & 1) full |= (Eigen::Index{1} << shifts[k]);
    return full;
}

}  // namespace

Operator partial_trace_matrix(const Operator& m, const SubsystemMask& keep) {
    const int n = qubit_count(m.rows());
    BitSplit split = make_split(n, keep);
    const Eigen::Index dk = Eigen::Index{1} << split.keep_shift.size();
    const Eigen::Index dt = Eigen::Index{1} << split.trace_shift.size();

    Operator out = Operator::Zero(dk, dk);
    for (Eigen::Index i = 0; i < dk; ++i) {
        const Eigen::Index fi = compose_index(i, split.keep_shift);
        for (Eigen::Index j = 0; j < dk; ++j) {
            const Eigen::Index fj = compose_index(j, split.keep_shift);
            cplx acc = 0.0;
            for (Eigen::Index r = 0; r < dt; ++r) {
                const Eigen::Index fr = compose_index(r, split.trace_shift);
                acc += m(fi | fr, fj | fr);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemMask& keep) {
    return DensityMatrix::unchecked(partial_trace_matrix(rho.mat, keep));
}

Operator embed_on_subsystem(const Operator& op, const SubsystemMask& on, int n_qubits) {
    if (op.rows() != (Eigen::Index{1} << on.size()))
        throw std::invalid_argument("operator dimension does not match subsystem size");
    BitSplit split = make_split(n_qubits, on);
    const Eigen::Index dk = Eigen::Index{1} << split.keep_shift.size();
    const Eigen::Index dt = Eigen::Index{1} << split.trace_shift.size();
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;

    Operator out = Operator::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dk; ++i) {
        const Eigen::Index fi = compose_index(i, split.keep_shift);
        for (Eigen::Index j = 0; j < dk; ++j) {
            const Eigen::Index fj = compose_index(j, split.keep_shift);
            const cplx val = op(i, j);
            if (val == cplx(0.0, 0.0)) continue;
            for (Eigen::Index r = 0; r < dt; ++r) {
                const Eigen::Index fr = compose_index(r, split.trace_shift);
                out(fi | fr, fj | fr) = val;
            }
        }
    }
    return out;
}

Spectrum eig_hermitian(const Operator& h) {
    if (!is_hermitian(h, 1e-10)) throw std::invalid_argument("operator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Operator> es(h);
    return Spectrum{es.eigenvalues(), es.eigenvectors()};
}

Operator unitary_exp(const Operator& h, double t) {
    Spectrum s = eig_hermitian(h);
    Eigen::VectorXcd phases(s.eigenvalues.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k)
        phases(k) = std::exp(cplx(0.0, -s.eigenvalues(k) * t));
    return s.eigenvectors * phases.asDiagonal() * s.eigenvectors.adjoint();
}

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Operator> es(rho.mat, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double lam = es.eigenvalues()(k);
        if (lam > 1e-12) s -= lam * std::log(lam);
    }
    return s;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    Spectrum sr = eig_hermitian(rho.mat);
    Spectrum ss = eig_hermitian(sigma.mat);
    constexpr double tol = 1e-12;

    double tr_rho_ln_rho = 0.0;
    for (Eigen::Index k = 0; k < sr.eigenvalues.size(); ++k) {
        const double lam = sr.eigenvalues(k);
        if (lam > tol) tr_rho_ln_rho += lam * std::log(lam);
    }

    double tr_rho_ln_sigma = 0.0;
    for (Eigen::Index j = 0; j < ss.eigenvalues.size(); ++j) {
        const double mu = ss.eigenvalues(j);
        const double weight = (ss.eigenvectors.col(j).adjoint() * rho.mat * ss.eigenvectors.col(j))(0).real();
        if (mu > tol) {
            tr_rho_ln_sigma += weight * std::log(mu);
        } else if (weight > 1e-9) {
            // rho has weight on sigma's null space
            return std::numeric_limits<double>::infinity();
        }
    }
    return tr_rho_ln_rho - tr_rho_ln_sigma;
}

PauliString PauliString::from_text(const std::string& s) {
    PauliString p;
    for (char c : s) {
        switch (c) {
            case 'I': p.letters.push_back(PauliLetter::I); break;
            case 'X': p.letters.push_back(PauliLetter::X); break;
            case 'Y': p.letters.push_back(PauliLetter::Y); break;
            case 'Z': p.letters.push_back(PauliLetter::Z); break;
            default: throw std::invalid_argument("invalid Pauli letter");
        }
    }
    if (p.letters.empty()) throw std::invalid_argument("empty Pauli string");
    return p;
}

std::string PauliString::text() const {
    static const char names[] = {'I', 'X', 'Y', 'Z'};
    std::string s;
    for (PauliLetter l : letters) s.push_back(names[static_cast<int>(l)]);
    return s;
}

const Operator& pauli_I() {
    static const Operator m = Operator::Identity(2, 2);
    return m;
}
const Operator& pauli_X() {
    static const Operator m = [] {
        Operator x(2, 2);
        x << 0, 1, 1, 0;
        return x;
    }();
    return m;
}
const Operator& pauli_Y() {
    static const Operator m = [] {
        Operator y(2, 2);
        y << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0);
        return y;
    }();
    return m;
}
const Operator& pauli_Z() {
    static const Operator m = [] {
        Operator z(2, 2);
        z << 1, 0, 0, -1;
        return z;
    }();
    return m;
}

namespace {
const Operator& letter_matrix(PauliLetter l) {
    switch (l) {
        case PauliLetter::I: return pauli_I();
        case PauliLetter::X: return pauli_X();
        case PauliLetter::Y: return pauli_Y();
        default: return pauli_Z();
    }
}
}  // namespace

Operator pauli_matrix(const PauliString& p) {
    Operator out = letter_matrix(p.letters[0]);
    for (size_t k = 1; k < p.letters.size(); ++k)
        out = tensor_product(out, letter_matrix(p.letters[k]));
    return out;
}

Operator embed_single_qubit(const Operator& m, int qubit, int n_qubits) {
    if (m.rows() != 2 || m.cols() != 2) throw std::invalid_argument("expected a 2x2 operator");
    if (qubit < 0 || qubit >= n_qubits) throw std::out_of_range("qubit index out of range");
    Operator out = (qubit == 0) ? m : identity_op(2);
    for (int q = 1; q < n_qubits; ++q)
        out = tensor_product(out, q == qubit ? m : identity_op(2));
    return out;
}

std::vector<PauliString> enumerate_pauli_strings(const SubsystemMask& support, int n_qubits,
                                                 bool include_identity) {
    for (int q : support.indices())
        if (q >= n_qubits) throw std::out_of_range("support index out of range");
    const int k = support.size();
    const size_t count = size_t{1} << (2 * k);
    std::vector<PauliString> out;
    out.reserve(count);
    for (size_t code = include_identity ? 0 : 1; code < count; ++code) {
        PauliString p;
        p.letters.assign(n_qubits, PauliLetter::I);
        size_t c = code;
        for (int j = k - 1; j >= 0; --j) {
            p.letters[support.indices()[j]] = static_cast<PauliLetter>(c & 3);
            c >>= 2;
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Operator> enumerate_pauli_group(const SubsystemMask& support, int n_qubits,
                                            bool include_identity) {
    std::vector<Operator> out;
    for (const PauliString& p : enumerate_pauli_strings(support, n_qubits, include_identity))
        out.push_back(pauli_matrix(p));
    return out;
}

}  // namespace scramble
