#include "eitmem/polariton.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace eitmem;

namespace {

std::vector<ControlSchedule> constants(const std::vector<double>& w) {
    std::vector<ControlSchedule> out;
    for (double x : w) out.push_back(ControlSchedule::constant(x, 1.0));
    return out;
}

}  // namespace

TEST(MixingAngles, ThetaReferenceValues) {
    // Reference values from tests/oracle/derive_values.py.
    EXPECT_NEAR(mixing_angles({1.0}, {100.0}).theta, 0.009999666686665238, 1e-15);
    EXPECT_NEAR(mixing_angles({1.0, 1.0}, {100.0, 100.0}).theta, 0.014141192927810294, 1e-15);
}

TEST(MixingAngles, ThreeEnsembleReference) {
    const auto a = mixing_angles({0.6, 1.7, 2.3}, {1.1, 0.8, 1.9});
    EXPECT_NEAR(a.theta, 1.191074261372594, 1e-14);
    ASSERT_EQ(a.phi.size(), 2u);
    EXPECT_NEAR(a.phi[0], 1.319536339244122, 1e-14);
    EXPECT_NEAR(a.phi[1], 0.5042027259873278, 1e-14);

    const auto c = straight_line({0.6, 1.7, 2.3}, constants({1.1, 0.8, 1.9}));
    const auto d = dsp_vector_line(mixing_angles(c, 0.0));
    const std::vector<double> ref{0.3706623470766311, 0, 0, 0, -0.20217946204179868, -0.7876574875378405,
                                  -0.44869652540855276};
    for (Eigen::Index i = 0; i < 7; ++i) EXPECT_NEAR(d.v(i), ref[static_cast<std::size_t>(i)], 1e-14);
}

TEST(MixingAngles, ZeroControlRejected) {
    EXPECT_THROW(mixing_angles({1.0, 1.0}, {1.0, 0.0}), DegenerateAngleError);
}

TEST(Dsp, NullVectorForRandomLines) {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> G(0.1, 5.0), W(0.01, 50.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + static_cast<std::size_t>(trial % 6);
        std::vector<double> g(m), w(m);
        for (std::size_t s = 0; s < m; ++s) {
            g[s] = G(rng);
            w[s] = W(rng);
        }
        const auto c = straight_line(g, constants(w));
        const auto h = build_hamiltonian(c, 0.0);
        const auto d = dsp_vector_line(mixing_angles(c, 0.0));
        EXPECT_LE(relative_residual(h, d.v), 1e-10);
        EXPECT_NEAR(d.v.norm(), 1.0, 1e-12);
        const auto sub = dark_subspace(h);
        ASSERT_EQ(sub.dimension(), 1);
        EXPECT_NEAR(std::abs(sub.basis.col(0).dot(d.v)), 1.0, 1e-10);
    }
}

TEST(Dsp, AnglesRoundTrip) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.01, std::numbers::pi / 2 - 0.01);
    for (int trial = 0; trial < 100; ++trial) {
        const MixingAngles a{U(rng), {U(rng), U(rng), U(rng)}};
        const auto back = angles_from_dsp(dsp_vector_line(a));
        EXPECT_NEAR(back.theta, a.theta, 1e-12);
        for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(back.phi[k], a.phi[k], 1e-12);
    }
}

TEST(Dsp, SquaredLastCouplingIsNotANullVector) {
    const auto c = straight_line({0.6, 1.7, 2.3}, constants({1.1, 0.8, 1.9}));
    const auto h = build_hamiltonian(c, 0.0);
    EXPECT_LE(relative_residual(h, dsp_vector_line(mixing_angles(c, 0.0)).v), 1e-10);
    EXPECT_GT(relative_residual(h, dsp_vector_line(mixing_angles_squared_last_coupling(c, 0.0)).v), 1e-3);
}

TEST(Dsp, SquaredFormAgreesWhenLastCouplingIsOne) {
    const auto c = straight_line({0.6, 1.7, 1.0}, constants({1.1, 0.8, 1.9}));
    const auto a = mixing_angles(c, 0.0), b = mixing_angles_squared_last_coupling(c, 0.0);
    EXPECT_NEAR(a.phi.back(), b.phi.back(), 1e-15);
}

TEST(Terminal, AnglesFollowInverseControlRatio) {
    const auto c = straight_line({1.0, 2.0}, {ControlSchedule::storage_ramp(4.0, 1.0, "g"),
                                              ControlSchedule::storage_ramp(2.0, 1.0, "g")});
    const auto a = terminal_mixing_angles(c);
    EXPECT_DOUBLE_EQ(a.theta, std::numbers::pi / 2);
    EXPECT_NEAR(std::tan(a.phi[0]), (2.0 / 2.0) / (1.0 / 4.0), 1e-12);
    const auto w = storage_weights(c);
    EXPECT_NEAR(w[0] * w[0] + w[1] * w[1], 1.0, 1e-14);
}

TEST(Terminal, ConstantControlEnsembleEndsEmpty) {
    const auto c = straight_line({1.0, 1.0}, {ControlSchedule::storage_ramp(4.0, 1.0),
                                              ControlSchedule::constant(4.0, 1.0)});
    const auto w = storage_weights(c);
    EXPECT_NEAR(w[0], 1.0, 1e-15);
    EXPECT_NEAR(w[1], 0.0, 1e-15);
}

TEST(CrossLine, DspPairSpansNullSpace) {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> G(0.1, 3.0), W(0.05, 20.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = cross_line(G(rng), G(rng), G(rng), G(rng), constants({W(rng), W(rng), W(rng)}));
        const auto h = build_hamiltonian(c, 0.0);
        const auto d = dsp_vectors_cross(c, 0.0);
        EXPECT_LE(relative_residual(h, d.d1.v), 1e-10);
        EXPECT_LE(relative_residual(h, d.d2.v), 1e-10);
        const auto& a = d.angles;
        EXPECT_NEAR(d.overlap, std::sin(a.theta1) * std::sin(a.theta2) * std::cos(a.phi1) * std::cos(a.phi2), 1e-14);
        const auto sub = dark_subspace(h);
        ASSERT_EQ(sub.dimension(), 2);
        const Eigen::MatrixXd P = sub.basis * sub.basis.transpose();
        EXPECT_LE((P * d.d1.v - d.d1.v).norm(), 1e-10);
        EXPECT_LE((P * d.d2.v - d.d2.v).norm(), 1e-10);
    }
}

TEST(CrossLine, TransferRegimeDecouples) {
    const CrossLineAngles a{std::numbers::pi / 2, std::numbers::pi / 2, std::numbers::pi / 2, std::numbers::pi / 2};
    const auto d = dsp_vectors_cross(a);
    EXPECT_NEAR(d.overlap, 0.0, 1e-30);
    EXPECT_NEAR(d.d1.v(d.d1.basis.spin(1)), -1.0, 1e-15);
    EXPECT_NEAR(d.d2.v(d.d2.basis.spin(2)), -1.0, 1e-15);
}

TEST(CrossLine, PhiGrowsWithOmegaOne) {
    const auto c = cross_line(1.0, 1.0, 1.0, 1.0, constants({1000.0, 1.0, 1.0}));
    const auto a = cross_line_angles(c, 0.0);
    EXPECT_NEAR(a.phi1, std::atan(1000.0), 1e-14);
    EXPECT_NEAR(a.phi2, std::atan(1000.0), 1e-14);
}

TEST(DarkSubspace, OrthonormalNullBasis) {
    const auto c = straight_line({1.0, 1.0, 1.0}, {ControlSchedule::storage_ramp(1.0, 1.0),
                                                   ControlSchedule::storage_ramp(1.0, 1.0),
                                                   ControlSchedule::constant(1.0, 1.0)});
    const auto sub = dark_subspace(build_hamiltonian(c, 1.0));
    // C1, C2 and the optical combination G2 A1 - G1 A2 once Omega_1 = Omega_2 = 0.
    EXPECT_EQ(sub.dimension(), 3);
    EXPECT_LE((sub.basis.transpose() * sub.basis - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-12);
    const auto h = build_hamiltonian(c, 1.0);
    for (Eigen::Index j = 0; j < sub.dimension(); ++j) EXPECT_LE(relative_residual(h, sub.basis.col(j)), 1e-12);
}
