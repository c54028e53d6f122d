#include <doctest.h>

#include <cmath>

#include "scramble/models.hpp"

using namespace scramble;

TEST_CASE("majorana operators on one qubit") {
    const Operator m1 = majorana(1, 2);
    const Operator m2 = majorana(2, 2);
    CHECK((m1 - pauli_X() / std::sqrt(2.0)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((m2 - pauli_Y() / std::sqrt(2.0)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("majorana anticommutation algebra at N=6") {
    const int n = 6;
    std::vector<Operator> psi;
    for (int i = 1; i <= n; ++i) psi.push_back(majorana(i, n));
    const Operator id = identity_op(psi[0].rows());
    for (int i = 0; i < n; ++i) {
        CHECK(is_hermitian(psi[i], 1e-14));
        CHECK((2.0 * psi[i] * psi[i] - id).cwiseAbs().maxCoeff() < 1e-12);
        for (int j = 0; j < n; ++j) {
            const Operator anti = psi[i] * psi[j] + psi[j] * psi[i];
            const Operator expect = (i == j) ? id : Operator(Operator::Zero(id.rows(), id.cols()));
            CHECK((anti - expect).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    CHECK_THROWS_AS(majorana(7, 6), std::out_of_range);
    CHECK_THROWS_AS(majorana(1, 5), std::invalid_argument);
}

TEST_CASE("coupling statistics match the Gaussian law") {
    // accumulate 1e5 couplings over consecutive seeds
    SykSpec spec;
    spec.n_majorana = 12;
    spec.q = 4;
    spec.j_scale = 1.0;

    const double target_var = 6.0 / (12.0 * 12.0 * 12.0);
    double sum = 0.0, sumsq = 0.0;
    long n = 0;
    uint64_t seed = 0;
    while (n < 100000) {
        spec.seed = seed++;
        for (const auto& [tup, val] : sample_syk_couplings(spec).values) {
            sum += val;
            sumsq += val * val;
            ++n;
            if (n == 100000) break;
        }
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    const double se_mean = std::sqrt(target_var / n);
    const double se_var = target_var * std::sqrt(2.0 / n);
    CHECK(std::abs(mean) < 5 * se_mean);
    CHECK(std::abs(var - target_var) < 5 * se_var);
}

TEST_CASE("coupling sampling is deterministic and complete") {
    SykSpec spec;
    spec.n_majorana = 8;
    spec.seed = 1234;
    const SykCouplings a = sample_syk_couplings(spec);
    const SykCouplings b = sample_syk_couplings(spec);
    REQUIRE(a.values.size() == 70);  // C(8,4)
    CHECK(a.values == b.values);
}

TEST_CASE("SYK Hamiltonian is Hermitian and traceless") {
    for (uint64_t s = 0; s < 3; ++s) {
        SykSpec spec;
        spec.n_majorana = 8;
        spec.seed = s;
        const Operator h = build_syk(spec, sample_syk_couplings(spec));
        CHECK(is_hermitian(h, 1e-10));
        CHECK(std::abs(h.trace()) < 1e-10);
    }
}

TEST_CASE("single-term SYK at N=4 has eigenvalues +-J/4") {
    SykSpec spec;
    spec.n_majorana = 4;
    spec.q = 4;
    SykCouplings c;
    c.values[{1, 2, 3, 4}] = 0.37;
    const Operator h = build_syk(spec, c);
    const Spectrum s = eig_hermitian(h);
    CHECK(s.eigenvalues(0) == doctest::Approx(-0.37 / 4).epsilon(1e-12));
    CHECK(s.eigenvalues(3) == doctest::Approx(0.37 / 4).epsilon(1e-12));

    SykCouplings wrong;
    wrong.values[{1, 2, 3, 4}] = 1.0;
    wrong.values[{1, 2, 3, 5}] = 1.0;
    CHECK_THROWS_AS(build_syk(spec, wrong), std::invalid_argument);
}

TEST_CASE("LMG spectrum at N=2") {
    LmgSpec spec;
    spec.n_spins = 2;
    spec.j_scale = 1.0;
    const Operator h = build_lmg(spec);
    CHECK(is_hermitian(h, 1e-12));
    const Spectrum s = eig_hermitian(h);
    CHECK(s.eigenvalues(0) == doctest::Approx(-2.0));
    CHECK(s.eigenvalues(1) == doctest::Approx(-1.0));
    CHECK(s.eigenvalues(2) == doctest::Approx(1.0));
    CHECK(s.eigenvalues(3) == doctest::Approx(2.0));
}

TEST_CASE("LMG commutes with total magnetization") {
    LmgSpec spec;
    spec.n_spins = 4;
    const Operator h = build_lmg(spec);
    Operator total_z = Operator::Zero(h.rows(), h.cols());
    for (int i = 0; i < 4; ++i) total_z += embed_single_qubit(pauli_Z(), i, 4);
    CHECK((h * total_z - total_z * h).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("initial states") {
    const DensityMatrix up = all_up_state(1);
    CHECK(up.mat(0, 0) == cplx(1, 0));
    CHECK(up.mat(1, 1) == cplx(0, 0));
    CHECK((up.mat * up.mat).trace().real() == doctest::Approx(1.0));
    CHECK(von_neumann_entropy(up) == doctest::Approx(0.0).epsilon(1e-12));

    const DensityMatrix neel = neel_state(2);
    CHECK(neel.mat(1, 1) == cplx(1, 0));  // |01>
    CHECK((neel.mat * neel.mat).trace().real() == doctest::Approx(1.0));

    const DensityMatrix n4 = neel_state(4);
    for (int i = 0; i < 4; ++i) {
        const Operator zi = embed_single_qubit(pauli_Z(), i, 4);
        const double expect = (i % 2 == 0) ? 1.0 : -1.0;
        CHECK((n4.mat * zi).trace().real() == doctest::Approx(expect));
    }
}
