#include "scramble/models.hpp"

#include <cmath>

#include "scramble/rng.hpp"

namespace scramble {

void SykSpec::validate() const {
    if (n_majorana < 4 || n_majorana % 2 != 0)
        throw std::invalid_argument("n_majorana must be even and >= 4");
    if (q < 2 || q % 2 != 0 || q > n_majorana)
        throw std::invalid_argument("q must be even, >= 2 and <= n_majorana");
    if (j_scale <= 0) throw std::invalid_argument("j_scale must be positive");
    if (n_majorana / 2 > kMaxQubits) throw std::invalid_argument("system exceeds 12 qubits");
}

void LmgSpec::validate() const {
    if (n_spins < 2) throw std::invalid_argument("n_spins must be >= 2");
    if (n_spins > kMaxQubits) throw std::invalid_argument("system exceeds 12 qubits");
    if (j_scale <= 0) throw std::invalid_argument("j_scale must be positive");
}

Operator majorana(int i, int n_majorana) {
    if (n_majorana < 2 || n_majorana % 2 != 0)
        throw std::invalid_argument("n_majorana must be even and >= 2");
    if (i < 1 || i > n_majorana) throw std::out_of_range("Majorana index out of range");
    const int n_qubits = n_majorana / 2;
    const int site = (i + 1) / 2;  // 1-based qubit site
    const bool odd = (i % 2 == 1);

    PauliString p;
    p.letters.assign(n_qubits, PauliLetter::I);
    for (int k = 0; k < site - 1; ++k) p.letters[k] = PauliLetter::Z;
    p.letters[site - 1] = odd ? PauliLetter::X : PauliLetter::Y;
    return pauli_matrix(p) / std::sqrt(2.0);
}

namespace {

// Strictly increasing q-tuples over 1..N in lexicographic order.
std::vector<std::vector<int>> index_tuples(int n, int q) {
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur(q);
    for (int k = 0; k < q; ++k) cur[k] = k + 1;
    while (true) {
        tuples.push_back(cur);
        int k = q - 1;
        while (k >= 0 && cur[k] == n - (q - 1 - k)) --k;
        if (k < 0) break;
        ++cur[k];
        for (int j = k + 1; j < q; ++j) cur[j] = cur[j - 1] + 1;
    }
    return tuples;
}

}  // namespace

SykCouplings sample_syk_couplings(const SykSpec& spec) {
    spec.validate();
    double log_var = 2.0 * std::log(spec.j_scale);
    for (int k = 2; k < spec.q; ++k) log_var += std::log(static_cast<double>(k));
    log_var -= (spec.q - 1) * std::log(static_cast<double>(spec.n_majorana));
    const double sigma = std::exp(0.5 * log_var);

    CounterRng rng(spec.seed);
    SykCouplings c;
    for (auto& tup : index_tuples(spec.n_majorana, spec.q))
        c.values.emplace(tup, sigma * rng.next_gaussian());
    return c;
}

Operator build_syk(const SykSpec& spec, const SykCouplings& couplings) {
    spec.validate();
    const auto tuples = index_tuples(spec.n_majorana, spec.q);
    if (couplings.values.size() != tuples.size())
        throw std::invalid_argument("coupling set inconsistent with spec");

    std::vector<Operator> psi;
    psi.reserve(spec.n_majorana);
    for (int i = 1; i <= spec.n_majorana; ++i) psi.push_back(majorana(i, spec.n_majorana));

    const Eigen::Index dim = psi[0].rows();
    // i^{q/2}
    cplx prefactor = 1.0;
    for (int k = 0; k < spec.q / 2; ++k) prefactor *= cplx(0.0, 1.0);

    Operator h = Operator::Zero(dim, dim);
    for (const auto& tup : tuples) {
        auto it = couplings.values.find(tup);
        if (it == couplings.values.end())
            throw std::invalid_argument("coupling set inconsistent with spec");
        Operator mono = psi[tup[0] - 1];
        for (int k = 1; k < spec.q; ++k) mono *= psi[tup[k] - 1];
        h += (prefactor * it->second) * mono;
    }
    return h;
}

Operator build_lmg(const LmgSpec& spec) {
    spec.validate();
    const int n = spec.n_spins;
    const Eigen::Index dim = Eigen::Index{1} << n;

    std::vector<Operator> x(n), y(n), z(n);
    for (int i = 0; i < n; ++i) {
        x[i] = embed_single_qubit(pauli_X(), i, n);
        y[i] = embed_single_qubit(pauli_Y(), i, n);
        z[i] = embed_single_qubit(pauli_Z(), i, n);
    }

    Operator h = Operator::Zero(dim, dim);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) h -= (spec.j_scale / n) * (x[i] * x[j] + y[i] * y[j]);
    for (int i = 0; i < n; ++i) h -= z[i];
    return h;
}

DensityMatrix all_up_state(int n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("need at least one qubit");
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(0) = 1.0;
    return pure_state(psi);
}

DensityMatrix neel_state(int n_qubits) {
    if (n_qubits < 2) throw std::invalid_argument("Neel state needs at least two qubits");
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    // |0101...>: bit of qubit k is k mod 2, qubit 0 most significant.
    Eigen::Index idx = 0;
    for (int k = 0; k < n_qubits; ++k)
        if (k % 2 == 1) idx |= Eigen::Index{1} << (n_qubits - 1 - k);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(idx) = 1.0;
    return pure_state(psi);
}

}  // namespace scramble
