#include <doctest.h>

#include <cmath>
#include <complex>

#include "scramble/diagnostics.hpp"
#include "scramble/models.hpp"
#include "scramble/rng.hpp"

using namespace scramble;

namespace {

Operator random_hermitian(int dim, uint64_t seed) {
    CounterRng rng(seed);
    Operator m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = cplx(rng.next_gaussian(), rng.next_gaussian());
    return Operator((m + m.adjoint()) / 2.0);
}

DensityMatrix random_state(int dim, uint64_t seed) {
    const Operator g = random_hermitian(dim, seed);
    Operator p = g * g.adjoint();
    p /= p.trace();
    return DensityMatrix::checked(p);
}

DensityMatrix haar_pure_state(int dim, uint64_t seed) {
    CounterRng rng(seed);
    const Eigen::MatrixXcd u = haar_unitary(dim, rng);
    return pure_state(u.col(0));
}

}  // namespace

TEST_CASE("otoc: single-qubit analytic oracle") {
    // H = Z, W = V = X, rho = |0><0|  ==>  F(t) = exp(4it)
    const DensityMatrix rho0 = all_up_state(1);
    for (double t : {0.0, 0.37, 1.1, 2.9}) {
        const cplx f = otoc(rho0, pauli_X(), pauli_X(), pauli_Z(), t);
        CHECK(std::abs(f - std::exp(cplx(0, 4 * t))) < 1e-12);
        const double c = squared_commutator(rho0, pauli_X(), pauli_X(), pauli_Z(), t);
        CHECK(c == doctest::Approx(2 * (1 - std::cos(4 * t))).epsilon(1e-10));
    }
}

TEST_CASE("otoc: C(t) = 2(1 - Re F) for random Pauli triples") {
    const int n = 3, dim = 8;
    CounterRng rng(400);
    for (int trial = 0; trial < 20; ++trial) {
        const Operator h = random_hermitian(dim, 401 + trial);
        const DensityMatrix rho = random_state(dim, 430 + trial);
        PauliString pw, pv;
        for (int q = 0; q < n; ++q) {
            pw.letters.push_back(static_cast<PauliLetter>(rng.next_u64() % 4));
            pv.letters.push_back(static_cast<PauliLetter>(rng.next_u64() % 4));
        }
        const Operator w = pauli_matrix(pw), v = pauli_matrix(pv);
        const double lhs = squared_commutator(rho, w, v, h, 1.7);
        const double rhs = 2 * (1 - otoc(rho, w, v, h, 1.7).real());
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("pauli-averaged otoc: exact enumeration matches a direct double loop") {
    const int n = 3;
    const Operator h = random_hermitian(8, 501);
    const DensityMatrix rho = random_state(8, 502);
    const SubsystemMask a({0}), b({1, 2});
    const double t = 1.3;

    // direct re-computation, conjugating each O_B by the evolution
    const Operator u = unitary_exp(h, t);
    double acc = 0;
    long pairs = 0;
    for (const Operator& oa : enumerate_pauli_group(a, n)) {
        for (const Operator& ob : enumerate_pauli_group(b, n)) {
            const Operator obt = u.adjoint().eval() * ob * u;
            acc += ((rho.mat * oa * obt * oa * obt).trace()).real();
            ++pairs;
        }
    }
    const double expect = acc / pairs;

    const PauliAverage got = pauli_averaged_otoc(rho, a, b, h, t);
    CHECK(got.exact);
    CHECK(got.n_pairs == 64);
    CHECK(got.value == doctest::Approx(expect).epsilon(1e-9));
    CHECK(got.value == doctest::Approx(got.value));
    CHECK(pauli_averaged_otoc(rho, a, b, h, 0.0).value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("pauli-averaged otoc: sampling agrees with enumeration") {
    const Operator h = random_hermitian(8, 511);
    const DensityMatrix rho = random_state(8, 512);
    const SubsystemMask a({0}), b({1, 2});
    const double t = 2.0;
    const PauliAverage exact = pauli_averaged_otoc(rho, a, b, h, t);
    PauliAverageOptions opts;
    opts.max_exact_pairs = 0;  // force sampling
    opts.sample_pairs = 4000;
    const PauliAverage sampled = pauli_averaged_otoc(rho, a, b, h, t, opts);
    CHECK_FALSE(sampled.exact);
    CHECK(sampled.stderr > 0.0);
    CHECK(std::abs(sampled.value - exact.value) < 4 * sampled.stderr + 1e-12);
}

TEST_CASE("mutual information on reference states") {
    SUBCASE("product state has zero mutual information") {
        const DensityMatrix rho = all_up_state(2);
        CHECK(mutual_information(rho, SubsystemMask({0}), SubsystemMask({1})) ==
              doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("Bell pair gives 2 ln 2") {
        Eigen::VectorXcd bell(4);
        bell << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
        CHECK(mutual_information(pure_state(bell), SubsystemMask({0}), SubsystemMask({1})) ==
              doctest::Approx(2 * std::log(2.0)).epsilon(1e-10));
    }
    SUBCASE("GHZ marginals give ln 2") {
        Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(8);
        ghz(0) = ghz(7) = 1 / std::sqrt(2.0);
        CHECK(mutual_information(pure_state(ghz), SubsystemMask({0}), SubsystemMask({1})) ==
              doctest::Approx(std::log(2.0)).epsilon(1e-10));
    }
}

TEST_CASE("information bound residual") {
    const SubsystemMask a({0}), b({1, 2});
    SUBCASE("t = 0 residual equals the initial mutual information") {
        const Operator h = random_hermitian(8, 601);
        const DensityMatrix rho0 = random_state(8, 602);
        CHECK(bound_residual(rho0, a, b, h, 0.0) ==
              doctest::Approx(mutual_information(rho0, a, b)).epsilon(1e-9));
    }
    SUBCASE("holds along scrambling trajectories of the disordered model") {
        // The inequality is a property of the dynamics/state pair, not an
        // operator identity; it is verified here on instances where entanglement
        // growth keeps pace with operator spreading.
        for (uint64_t s : {0ull, 1ull, 2ull}) {
            SykSpec spec;
            spec.n_majorana = 6;
            spec.seed = s;
            const Operator h = build_syk(spec, sample_syk_couplings(spec));
            for (double t : {0.0, 0.5, 1.5, 4.0, 9.0}) {
                CHECK(bound_residual(all_up_state(3), a, b, h, t) >= -1e-9);
            }
        }
    }
    SUBCASE("counterexample: a stationary product eigenstate violates the inequality") {
        // |0000> is an eigenstate of the collective XY model, so the mutual
        // information stays zero while Heisenberg operators still spread.
        LmgSpec spec;
        spec.n_spins = 4;
        const Operator h = build_lmg(spec);
        const SubsystemMask b3({1, 2, 3});
        double worst = 1e9;
        for (double t : {2.0, 4.0, 6.0})
            worst = std::min(worst, bound_residual(all_up_state(4), a, b3, h, t));
        CHECK(worst < -1e-3);
    }
}

TEST_CASE("tripartite mutual information on reference states") {
    const SubsystemMask a({0}), b({1}), c({2});
    SUBCASE("product state: zero") {
        CHECK(tripartite_mutual_information(all_up_state(3), a, b, c) ==
              doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("GHZ: ln2 + ln2 - 2 ln2 = 0") {
        Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(8);
        ghz(0) = ghz(7) = 1 / std::sqrt(2.0);
        CHECK(tripartite_mutual_information(pure_state(ghz), a, b, c) ==
              doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("Haar-random four-qubit pure states are typically negative") {
        const SubsystemMask c2({2, 3});
        double mean = 0;
        for (uint64_t s = 0; s < 10; ++s)
            mean += tripartite_mutual_information(haar_pure_state(16, 700 + s), a, b, c2);
        CHECK(mean / 10 < 0.0);
    }
}

TEST_CASE("open bipartite otoc") {
    const int n = 3;
    const Operator h = random_hermitian(8, 801);
    const SubsystemMask a({0}), b({2});

    LindbladSpec spec;
    spec.hamiltonian = h;
    spec.jump_ops = dephasing_jumps(DecoherenceBasis::computational, h, n);
    spec.gamma = 0.5;

    SUBCASE("vanishes at t = 0") {
        CHECK(open_bipartite_otoc(spec, a, b, 0.0).value == doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("matches a direct pair average") {
        const double t = 1.1;
        double acc = 0;
        long pairs = 0;
        for (const Operator& va : enumerate_pauli_group(a, n)) {
            const Operator ev = heisenberg_adjoint(va, spec, t);
            for (const Operator& wb : enumerate_pauli_group(b, n)) {
                const Operator comm = ev * wb - wb * ev;
                acc += comm.squaredNorm();
                ++pairs;
            }
        }
        const double expect = acc / pairs / (2.0 * 8.0);
        const PauliAverage got = open_bipartite_otoc(spec, a, b, t);
        CHECK(got.value == doctest::Approx(expect).epsilon(1e-9));
        CHECK(got.value >= 0.0);
    }
    SUBCASE("closed limit equals the unitary pair average") {
        LindbladSpec closed = spec;
        closed.gamma = 0.0;
        const double t = 2.3;
        const Operator u = unitary_exp(h, t);
        double acc = 0;
        long pairs = 0;
        for (const Operator& va : enumerate_pauli_group(a, n)) {
            const Operator ev = u.adjoint().eval() * va * u;
            for (const Operator& wb : enumerate_pauli_group(b, n)) {
                acc += (ev * wb - wb * ev).squaredNorm();
                ++pairs;
            }
        }
        CHECK(open_bipartite_otoc(closed, a, b, t).value ==
              doctest::Approx(acc / pairs / 16.0).epsilon(1e-8));
    }
}

TEST_CASE("wingflap statistics") {
    SUBCASE("commuting kick gives a point mass at zero") {
        // W = Z commutes with O = Z and H = Z
        const auto dist = wingflap_distribution(all_up_state(1), pauli_Z(), pauli_Z(), pauli_Z(), 1.0);
        REQUIRE(dist.size() == 1);
        CHECK(dist[0].delta == doctest::Approx(0.0));
        CHECK(dist[0].probability == doctest::Approx(1.0));
    }
    SUBCASE("bit flip on a mixed qubit") {
        // O = Z, W = X, H = 0: delta = -2 with prob p0, +2 with prob p1
        Operator rho = Operator::Zero(2, 2);
        rho(0, 0) = 0.7;
        rho(1, 1) = 0.3;
        const auto dist = wingflap_distribution(DensityMatrix::checked(rho), pauli_Z(), pauli_X(),
                                                Operator::Zero(2, 2), 0.8);
        REQUIRE(dist.size() == 2);
        CHECK(dist[0].delta == doctest::Approx(-2.0));
        CHECK(dist[0].probability == doctest::Approx(0.7));
        CHECK(dist[1].delta == doctest::Approx(2.0));
        CHECK(dist[1].probability == doctest::Approx(0.3));
    }
    SUBCASE("probabilities are normalized") {
        const Operator h = random_hermitian(4, 901);
        CounterRng rng(902);
        const Operator w = haar_unitary(4, rng);
        const Operator o = embed_single_qubit(pauli_Z(), 0, 2);
        const auto dist = wingflap_distribution(random_state(4, 903), o, w, h, 1.4);
        double total = 0;
        for (const auto& out : dist) total += out.probability;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("characteristic function equals the otoc with an exponential kick") {
        // for rho diagonal in the O basis: tr[rho B^dag e^{-iuO} B e^{iuO}] = G(-u)
        const Operator h = random_hermitian(4, 911);
        CounterRng rng(912);
        const Operator w = haar_unitary(4, rng);
        const Operator o = embed_single_qubit(pauli_Z(), 0, 2);
        Operator diag = Operator::Zero(4, 4);
        diag(0, 0) = 0.4;
        diag(1, 1) = 0.3;
        diag(2, 2) = 0.2;
        diag(3, 3) = 0.1;
        const DensityMatrix rho = DensityMatrix::checked(diag);
        const double tau = 1.2;
        const auto dist = wingflap_distribution(rho, o, w, h, tau);
        for (double u : {0.0, 0.5, 1.7, 3.0}) {
            const Operator v = unitary_exp(o, -u);  // e^{iuO}
            const cplx f = otoc(rho, w, v, h, tau);
            const cplx g = characteristic_function(dist, -u);
            CHECK(std::abs(f - g) < 1e-9);
        }
    }
}

TEST_CASE("entropy decomposition identity") {
    const Operator h_sys = random_hermitian(4, 1001);
    const DensityMatrix rho0 = random_state(4, 1002);

    SUBCASE("t = 0: all terms vanish") {
        const JointModel model = build_joint_dephasing_model(2, h_sys, 0.7);
        const DecompositionRecord rec = entropy_decomposition(model, rho0, 0.0);
        CHECK(std::abs(rec.mutual_info_SE) < 1e-9);
        CHECK(std::abs(rec.delta_s_exchange) < 1e-9);
        CHECK(std::abs(rec.rel_entropy_env) < 1e-9);
        CHECK(std::abs(rec.delta_s_system) < 1e-9);
    }
    SUBCASE("gamma = 0: system entropy is constant") {
        const JointModel model = build_joint_dephasing_model(2, h_sys, 0.0);
        const DecompositionRecord rec = entropy_decomposition(model, rho0, 3.0);
        CHECK(std::abs(rec.delta_s_system) < 1e-8);
        CHECK(std::abs(rec.residual()) < 1e-8);
    }
    SUBCASE("interacting case satisfies the identity and positivity") {
        const JointModel model = build_joint_dephasing_model(2, h_sys, 0.6);
        for (double t : {1.0, 5.0, 10.0}) {
            const DecompositionRecord rec = entropy_decomposition(model, rho0, t);
            CHECK(std::abs(rec.residual()) < 1e-8);
            CHECK(rec.mutual_info_SE >= -1e-10);
            CHECK(rec.rel_entropy_env >= -1e-10);
            // infinite-temperature equilibrium makes the exchange term vanish
            CHECK(std::abs(rec.delta_s_exchange) < 1e-8);
        }
    }
}

TEST_CASE("averaged otoc trace matches the static evaluator under closed dynamics") {
    const Operator h = random_hermitian(8, 1101);
    const DensityMatrix rho0 = all_up_state(3);
    const SubsystemMask a({0}), b({1, 2});
    const DephasingPropagator prop(h, DecoherenceBasis::computational, 0.0, 3);
    const std::vector<double> times = {0.0, 0.5, 1.0, 2.0, 4.0};
    const TraceWithError trace = averaged_otoc_trace(rho0, a, b, prop, times);
    REQUIRE(trace.mean.size() == times.size());
    for (size_t k = 0; k < times.size(); ++k) {
        const PauliAverage ref = pauli_averaged_otoc(rho0, a, b, h, times[k]);
        CHECK(trace.mean[k] == doctest::Approx(ref.value).epsilon(1e-8));
        CHECK(trace.stderr[k] == doctest::Approx(0.0));
    }
}

TEST_CASE("averaged otoc trace under dephasing matches the Lindblad adjoint average") {
    const Operator h = random_hermitian(8, 1121);
    const DensityMatrix rho0 = all_up_state(3);
    const SubsystemMask a({0}), b({1, 2});
    const std::vector<double> times = {0.0, 0.7, 1.5};
    const double gamma = 0.6;
    for (const DecoherenceBasis basis :
         {DecoherenceBasis::energy, DecoherenceBasis::computational}) {
        const DephasingPropagator prop(h, basis, gamma, 3);
        const TraceWithError trace = averaged_otoc_trace(rho0, a, b, prop, times);
        LindbladSpec spec;
        spec.hamiltonian = h;
        spec.gamma = gamma;
        spec.jump_ops = dephasing_jumps(basis, h, 3);
        const auto ops_a = enumerate_pauli_group(a, 3);
        const auto ops_b = enumerate_pauli_group(b, 3);
        // energy mode is exact; computational mode carries Strang splitting error
        const double tol = basis == DecoherenceBasis::energy ? 1e-9 : 5e-6;
        for (size_t j = 0; j < times.size(); ++j) {
            double acc = 0.0;
            for (const Operator& ob : ops_b) {
                const Operator bt = heisenberg_adjoint(ob, spec, times[j]);
                for (const Operator& oa : ops_a)
                    acc += (rho0.mat * oa * bt * oa * bt).trace().real();
            }
            acc /= static_cast<double>(ops_a.size() * ops_b.size());
            CHECK(std::abs(trace.mean[j] - acc) < tol);
        }
    }
}

TEST_CASE("averaged otoc trace: sampled O_B agrees within error bars") {
    const Operator h = random_hermitian(8, 1111);
    const DensityMatrix rho0 = all_up_state(3);
    const SubsystemMask a({0}), b({1, 2});
    const DephasingPropagator prop(h, DecoherenceBasis::computational, 0.0, 3);
    const std::vector<double> times = {1.0, 3.0};
    AveragedOtocTraceOptions opts;
    opts.ob_samples = 400;
    opts.sample_seed = 99;
    const TraceWithError sampled = averaged_otoc_trace(rho0, a, b, prop, times, opts);
    for (size_t k = 0; k < times.size(); ++k) {
        const PauliAverage ref = pauli_averaged_otoc(rho0, a, b, h, times[k]);
        CHECK(sampled.stderr[k] > 0.0);
        CHECK(std::abs(sampled.mean[k] - ref.value) < 4 * sampled.stderr[k] + 1e-12);
    }
}
