#include "eitmem/catstate.hpp"
#include "eitmem/propagator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace eitmem;

namespace {

Eigen::VectorXcd vec(std::initializer_list<cplx> xs) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (auto x : xs) v(i++) = x;
    return v;
}

CatState random_state(std::mt19937_64& rng, Eigen::Index modes, std::size_t branches) {
    std::normal_distribution<double> N(0.0, 0.8);
    CatState s;
    for (std::size_t b = 0; b < branches; ++b) {
        Eigen::VectorXcd a(modes);
        for (Eigen::Index i = 0; i < modes; ++i) a(i) = {N(rng), N(rng)};
        s.branches.push_back({{N(rng), N(rng)}, a});
    }
    return s;
}

Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> N(0.0, 1.0);
    Eigen::MatrixXd h(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) h(i, j) = h(j, i) = N(rng);
    return step_exponential(h, 1.0);
}

}  // namespace

TEST(Coherent, OverlapClosedForm) {
    const cplx a{0.3, -0.4}, b{-1.1, 0.2};
    const cplx expect = std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(b) * a);
    EXPECT_LE(std::abs(coherent_overlap(vec({a}), vec({b})) - expect), 1e-15);
    EXPECT_NEAR(std::abs(coherent_overlap(vec({a, b}), vec({a, b}))), 1.0, 1e-15);
}

TEST(Coherent, GramIsHermitianPositive) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = random_state(rng, 3, 4);
        const auto S = gram(s);
        EXPECT_LE((S - S.adjoint()).norm(), 1e-15);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    }
}

TEST(Entropy, ReferenceValues) {
    // Reference values from tests/oracle/derive_values.py (Fock truncation at 30 quanta).
    const double a = 0.5 / std::sqrt(2.0);
    EXPECT_NEAR(entanglement_entropy(CatState::cat2(vec({a, a}), vec({-a, -a}), 1.0), {0}), 0.07883561888991772, 1e-12);
    const double b = 1.2;
    EXPECT_NEAR(entanglement_entropy(CatState::cat2(vec({0.6 * b, 0.8 * b}), vec({-0.6 * b, -0.8 * b}), -1.0), {0}),
                0.6713668208108663, 1e-12);
}

TEST(Entropy, OddCatSplitSymmetricallyIsOneEbit) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> A(0.2, 4.0);
    for (int trial = 0; trial < 30; ++trial) {
        const double a = A(rng) / std::sqrt(2.0);
        const auto s = CatState::cat2(vec({a, a}), vec({-a, -a}), -1.0);
        EXPECT_NEAR(entanglement_entropy(s, {0}), std::log(2.0), 1e-10);
    }
}

TEST(Entropy, ProductStateHasNone) {
    EXPECT_NEAR(entanglement_entropy(CatState::coherent(vec({0.5, {0.1, 0.3}})), {0}), 0.0, 1e-14);
    const auto s = CatState::cat2(vec({1.0, 0.7}), vec({-1.0, 0.7}), 1.0);
    EXPECT_NEAR(entanglement_entropy(s, {0}), 0.0, 1e-12);
}

TEST(Entropy, ComplementaryPartiesAgree) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = random_state(rng, 4, 1 + static_cast<std::size_t>(trial % 4));
        EXPECT_NEAR(entanglement_entropy(s, {0, 2}), entanglement_entropy(s, {1, 3}), 1e-9);
    }
}

TEST(ReducedDensity, TraceOneAndBounded) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto r = reduced_density(random_state(rng, 3, 3), {1});
        EXPECT_NEAR(r.eigenvalues.sum(), 1.0, 1e-10);
        EXPECT_GE(r.eigenvalues.minCoeff(), 0.0);
        EXPECT_LE(r.eigenvalues.maxCoeff(), 1.0 + 1e-12);
    }
}

TEST(Fidelity, InvariantUnderCommonUnitary) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto a = random_state(rng, 3, 2), b = random_state(rng, 3, 2);
        const auto U = random_unitary(rng, 3);
        EXPECT_NEAR(fidelity(a, a), 1.0, 1e-12);
        EXPECT_NEAR(fidelity(apply_unitary(a, U), apply_unitary(b, U)), fidelity(a, b), 1e-10);
        EXPECT_NEAR(norm_squared(apply_unitary(a, U)), norm_squared(a), 1e-10);
    }
}

TEST(Negativity, ReferenceValues) {
    // Reference values from tests/oracle/derive_values.py (Fock truncation at 15 quanta).
    const double a = 1.5 / std::sqrt(3.0);
    const auto ghz = CatState::cat2(vec({a, a, a}), vec({-a, -a, -a}), -1.0);
    for (Eigen::Index t = 0; t < 3; ++t) EXPECT_NEAR(reduced_two_party_negativity(ghz, t), 0.1830523626621157, 1e-9);

    const double b0 = 0.9 * 0.5, b1 = 0.9 * 0.7, b2 = 0.9 * std::sqrt(1 - 0.74);
    const auto s = CatState::cat2(vec({b0, b1, b2}), vec({-b0, -b1, -b2}), 1.0);
    EXPECT_NEAR(reduced_two_party_negativity(s, 0), 0.3158146673952814, 1e-9);
    EXPECT_NEAR(reduced_two_party_negativity(s, 1), 0.19241419252234593, 1e-9);
    EXPECT_NEAR(reduced_two_party_negativity(s, 2), 0.3076734113445019, 1e-9);
}

TEST(Negativity, ProductThirdModeGivesPureStateValue) {
    const double a = 0.8;
    const auto s = CatState::cat2(vec({a, a, 0.4}), vec({-a, -a, 0.4}), -1.0);
    const auto lam = reduced_density(s, {0}).eigenvalues;
    double sq = 0.0;
    for (double l : lam) sq += std::sqrt(l);
    EXPECT_NEAR(reduced_two_party_negativity(s, 2), std::log(sq * sq), 1e-10);
}

TEST(Negativity, VanishesInVacuumLimit) {
    const double a = 1e-4;
    const auto s = CatState::cat2(vec({a, a, a}), vec({-a, -a, -a}), 1.0);
    EXPECT_LT(reduced_two_party_negativity(s, 0), 1e-6);
}

TEST(Ghz, DecompositionExact) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> A(0.2, 2.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double a = A(rng);
        const double sign = trial % 2 ? -1.0 : 1.0;
        const auto g = ghz_decompose(CatState::cat2(vec({a, a, a}), vec({-a, -a, -a}), sign));
        EXPECT_EQ(g.parity, sign > 0 ? 1 : -1);
        EXPECT_LE(g.residual, 1e-10);
        EXPECT_LE(std::abs(g.plus_minus_overlap), 1e-15);
        EXPECT_NEAR(std::norm(g.xi) + 3 * std::norm(g.zeta), 1.0, 1e-12);
        const double t = std::tanh(a * a);
        EXPECT_NEAR(std::abs(g.zeta / g.xi), sign > 0 ? t : 1.0 / t, 1e-10);
    }
}

TEST(Ghz, RejectsBadInput) {
    EXPECT_THROW(ghz_decompose(CatState::cat2(vec({1.0, 1.0, 1.0}), vec({1.0, 1.0, 1.0}), 1.0)), DegenerateStateError);
    EXPECT_THROW(ghz_decompose(CatState::cat2(vec({1.0, 0.5, 1.0}), vec({-1.0, -1.0, -1.0}), 1.0)), ShapeError);
    EXPECT_THROW(ghz_decompose(CatState::coherent(vec({1.0, 1.0, 1.0}))), ShapeError);
}

TEST(CatState, Validation) {
    EXPECT_THROW(entanglement_entropy(CatState::cat2(vec({1.0, 1.0}), vec({1.0, 1.0}), -1.0), {0}), DegenerateStateError);
    CatState big;
    for (int i = 0; i < 5; ++i) big.branches.push_back({1.0, vec({double(i)})});
    EXPECT_THROW(check_cat_state(big), ShapeError);
    EXPECT_THROW(entanglement_entropy(CatState::coherent(vec({1.0, 1.0})), {5}), DimensionError);
    EXPECT_THROW(entanglement_entropy(CatState::coherent(vec({1.0, 1.0})), {}), ShapeError);
}
