// polariton.hpp - mixing angles, dark-state-polariton vectors, and numerical dark subspaces.
//
// A dark polariton d = sum_i v_i b_i commutes with V exactly when h v = 0. For a
// straight line (one photon, m ensembles) the null vector is
//
//     v ∝ ( 1 ; 0 ... 0 ; -x_1 ... -x_m ),   x_sigma = g_sigma sqrt(N_sigma) / Omega_sigma,
//
// so tan(theta) = |x| and the phi angles are hyperspherical coordinates of x:
// tan(phi_{k-1}) = x_k / |(x_1 .. x_{k-1})|.

#pragma once

#include "eitmem/errors.hpp"
#include "eitmem/system.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

namespace eitmem {

inline constexpr double kDefaultNullTol = 1e-10;

struct MixingAngles {
    double theta{0.0};
    std::vector<double> phi;  // m - 1 entries
};

struct DspVector {
    Eigen::VectorXd v;
    ModeBasis basis;
};

namespace detail {

inline void require_straight_line(const SystemConfig& c, const char* who) {
    if (classify(c) != Topology::StraightLine)
        throw ConfigError(std::string(who) + ": requires straight-line topology");
}

inline void require_cross_line(const SystemConfig& c, const char* who) {
    if (classify(c) != Topology::CrossLine) throw ConfigError(std::string(who) + ": requires cross-line topology");
}

// phi angles from the storage-weight vector x (nonnegative entries).
inline std::vector<double> phi_from_weights(const std::vector<double>& x) {
    std::vector<double> phi;
    double acc = x.empty() ? 0.0 : x[0] * x[0];
    for (std::size_t k = 1; k < x.size(); ++k) {
        phi.push_back(std::atan2(x[k], std::sqrt(acc)));
        acc += x[k] * x[k];
    }
    return phi;
}

}  // namespace detail

// Mixing angles from couplings G_sigma = g sqrt(N) and controls Omega_sigma > 0.
inline MixingAngles mixing_angles(const std::vector<double>& couplings, const std::vector<double>& omegas) {
    std::vector<double> x(couplings.size());
    double norm2 = 0.0;
    for (std::size_t s = 0; s < x.size(); ++s) {
        if (!(omegas[s] > 0.0))
            throw DegenerateAngleError("mixing angles undefined: Omega_" + std::to_string(s + 1) +
                                       " = 0; use dark_subspace instead");
        x[s] = couplings[s] / omegas[s];
        norm2 += x[s] * x[s];
    }
    return {std::atan(std::sqrt(norm2)), detail::phi_from_weights(x)};
}

inline std::vector<double> line_couplings(const SystemConfig& c) {
    std::vector<double> G(c.m());
    for (std::size_t s = 0; s < c.m(); ++s) G[s] = coupling(c, 0, s);
    return G;
}

inline MixingAngles mixing_angles(const SystemConfig& c, double t) {
    detail::require_straight_line(c, "mixing_angles");
    return mixing_angles(line_couplings(c), controls_at(c, t));
}

// Same as mixing_angles except the last phi uses g_m^2 sqrt(N_m) in the numerator
// instead of g_m sqrt(N_m). This form is not a null vector of h for g_m != 1 and is
// kept only so the regression test can show it.
inline MixingAngles mixing_angles_squared_last_coupling(const SystemConfig& c, double t) {
    auto a = mixing_angles(c, t);
    const std::size_t m = c.m();
    if (m < 2) return a;
    const auto G = line_couplings(c);
    const auto w = controls_at(c, t);
    double acc = 0.0;
    for (std::size_t s = 0; s + 1 < m; ++s) acc += (G[s] / w[s]) * (G[s] / w[s]);
    double g_m = 0.0;
    for (const auto& e : c.edges)
        if (e.ensemble == c.ensembles[m - 1].id) g_m = e.g;
    a.phi.back() = std::atan2(g_m * G[m - 1] / w[m - 1], std::sqrt(acc));
    return a;
}

// DSP coefficients for a straight line with m = angles.phi.size() + 1 ensembles.
inline DspVector dsp_vector_line(const MixingAngles& a) {
    const std::size_t m = a.phi.size() + 1;
    const ModeBasis basis(1, m);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(basis.size());
    v(basis.photon(0)) = std::cos(a.theta);
    const double st = std::sin(a.theta);
    for (std::size_t k = 0; k < m; ++k) {
        // ensemble k+1: sin(phi_k) (k >= 1) times prod_{j >= k+1} cos(phi_j)
        double w = k == 0 ? 1.0 : std::sin(a.phi[k - 1]);
        for (std::size_t j = k; j + 1 < m; ++j) w *= std::cos(a.phi[j]);
        v(basis.spin(k)) = -st * w;
    }
    return {std::move(v), basis};
}

// Inverse of dsp_vector_line for a vector with zero optical part and nonnegative
// photon / nonpositive spin entries (the sign convention of dsp_vector_line).
inline MixingAngles angles_from_dsp(const DspVector& d) {
    const ModeBasis& b = d.basis;
    std::vector<double> x(b.ensembles());
    double s2 = 0.0;
    for (std::size_t s = 0; s < x.size(); ++s) {
        x[s] = std::abs(d.v(b.spin(s)));
        s2 += x[s] * x[s];
    }
    return {std::atan2(std::sqrt(s2), std::abs(d.v(b.photon(0)))), detail::phi_from_weights(x)};
}

// ---------------------------------------------------------------- terminal limit

// Inverse controls 1/Omega_sigma(t -> T) up to a common (divergent) scale: the
// ensembles whose control vanishes fastest dominate, the others weigh zero.
inline std::vector<double> terminal_inverse_controls(const SystemConfig& c) {
    std::vector<TerminalBehavior> tb(c.m());
    int max_order = 0;
    for (std::size_t s = 0; s < c.m(); ++s) {
        tb[s] = terminal_behavior(c.controls.at(c.ensembles[s].id));
        if (!(tb[s].coefficient > 0.0))
            throw DegenerateAngleError("control of '" + c.ensembles[s].id + "' vanishes identically near T");
        max_order = std::max(max_order, tb[s].order);
    }
    std::vector<double> y(c.m(), 0.0);
    for (std::size_t s = 0; s < c.m(); ++s)
        if (tb[s].order == max_order) y[s] = 1.0 / tb[s].coefficient;
    return y;
}

// Mixing angles in the limit t -> T. theta is pi/2 when any control switches off.
inline MixingAngles terminal_mixing_angles(const SystemConfig& c) {
    detail::require_straight_line(c, "terminal_mixing_angles");
    const auto G = line_couplings(c);
    const auto y = terminal_inverse_controls(c);
    std::vector<double> x(c.m());
    for (std::size_t s = 0; s < c.m(); ++s) x[s] = G[s] * y[s];
    const auto w = controls_at(c, c.controls.at(c.ensembles[0].id).T);
    const bool any_off = std::any_of(w.begin(), w.end(), [](double v) { return v == 0.0; });
    if (!any_off) return mixing_angles(G, w);
    return {std::numbers::pi / 2, detail::phi_from_weights(x)};
}

// Normalized storage weights (cos phi, sin phi ...) reached at the end of the ramp.
inline std::vector<double> storage_weights(const SystemConfig& c) {
    const auto a = terminal_mixing_angles(c);
    DspVector d = dsp_vector_line({std::numbers::pi / 2, a.phi});
    std::vector<double> w(c.m());
    for (std::size_t s = 0; s < c.m(); ++s) w[s] = -d.v(d.basis.spin(s));
    return w;
}

// ---------------------------------------------------------------- cross line

struct CrossLineAngles {
    double theta1{0.0}, theta2{0.0};
    double phi1{0.0}, phi2{0.0};
};

struct CrossLineDsp {
    DspVector d1, d2;
    CrossLineAngles angles;
    double overlap{0.0};  // <d1, d2>
};

inline CrossLineAngles cross_line_angles(const SystemConfig& c, double t) {
    detail::require_cross_line(c, "cross_line_angles");
    const auto w = controls_at(c, t);
    for (std::size_t s = 0; s < 3; ++s)
        if (!(w[s] > 0.0))
            throw DegenerateAngleError("cross-line angles undefined: Omega_" + std::to_string(s + 1) +
                                       " = 0; use dark_subspace instead");
    const double x11 = coupling(c, 0, 0) / w[0], x12 = coupling(c, 0, 1) / w[1];
    const double x21 = coupling(c, 1, 0) / w[0], x23 = coupling(c, 1, 2) / w[2];
    return {std::atan(std::hypot(x11, x12)), std::atan(std::hypot(x21, x23)), std::atan2(x12, x11),
            std::atan2(x23, x21)};
}

inline CrossLineDsp dsp_vectors_cross(const CrossLineAngles& a) {
    const ModeBasis b(2, 3);
    Eigen::VectorXd d1 = Eigen::VectorXd::Zero(b.size()), d2 = Eigen::VectorXd::Zero(b.size());
    d1(b.photon(0)) = std::cos(a.theta1);
    d1(b.spin(0)) = -std::sin(a.theta1) * std::cos(a.phi1);
    d1(b.spin(1)) = -std::sin(a.theta1) * std::sin(a.phi1);
    d2(b.photon(1)) = std::cos(a.theta2);
    d2(b.spin(0)) = -std::sin(a.theta2) * std::cos(a.phi2);
    d2(b.spin(2)) = -std::sin(a.theta2) * std::sin(a.phi2);
    const double ov = d1.dot(d2);
    return {{std::move(d1), b}, {std::move(d2), b}, a, ov};
}

inline CrossLineDsp dsp_vectors_cross(const SystemConfig& c, double t) {
    return dsp_vectors_cross(cross_line_angles(c, t));
}

// Cross-line angles in the limit t -> T.
inline CrossLineAngles terminal_cross_line_angles(const SystemConfig& c) {
    detail::require_cross_line(c, "terminal_cross_line_angles");
    const auto w = controls_at(c, c.controls.at(c.ensembles[0].id).T);
    if (std::all_of(w.begin(), w.end(), [](double v) { return v > 0.0; }))
        return cross_line_angles(c, c.controls.at(c.ensembles[0].id).T);
    const auto y = terminal_inverse_controls(c);
    const double pi2 = std::numbers::pi / 2;
    return {pi2, pi2, std::atan2(coupling(c, 0, 1) * y[1], coupling(c, 0, 0) * y[0]),
            std::atan2(coupling(c, 1, 2) * y[2], coupling(c, 1, 0) * y[0])};
}

// ---------------------------------------------------------------- null space

struct DarkSubspace {
    Eigen::MatrixXd basis;  // columns: orthonormal null vectors
    double h_norm{0.0};     // spectral norm of h
    Eigen::Index dimension() const { return basis.cols(); }
};

namespace detail {

// Orthonormal basis of range(Q) (Q has orthonormal columns) obtained by projecting the
// unit vectors e_0, e_1, ... in index order; independent of the input basis choice.
inline Eigen::MatrixXd canonical_span(const Eigen::MatrixXd& Q) {
    const Eigen::Index n = Q.rows(), k = Q.cols();
    Eigen::MatrixXd out(n, k);
    Eigen::Index found = 0;
    for (Eigen::Index i = 0; i < n && found < k; ++i) {
        Eigen::VectorXd v = Q * Q.row(i).transpose();
        for (Eigen::Index j = 0; j < found; ++j) v -= out.col(j).dot(v) * out.col(j);
        const double nv = v.norm();
        if (nv > 1e-8) out.col(found++) = v / nv;
    }
    return out.leftCols(found);
}

}  // namespace detail

// Orthonormal basis of {v : |h v| <= tol |h|}. Columns are ordered by descending
// photon-component magnitude; photon-free columns follow in basis-index order.
// Each column's largest photon entry (or first nonzero entry) is positive.
inline DarkSubspace dark_subspace(const Eigen::MatrixXd& h, std::size_t n_photons, double tol = kDefaultNullTol) {
    const Eigen::Index n = h.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const double hn = es.eigenvalues().cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(es.eigenvalues()(i)) <= tol * hn) idx.push_back(i);
    Eigen::MatrixXd N(n, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) N.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(idx[j]);

    const auto np = static_cast<Eigen::Index>(n_photons);
    Eigen::MatrixXd out(n, N.cols());
    Eigen::Index filled = 0;
    if (N.cols() > 0 && np > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(N.topRows(np), Eigen::ComputeFullV);
        const Eigen::MatrixXd R = N * svd.matrixV();
        const auto& sv = svd.singularValues();
        for (Eigen::Index j = 0; j < sv.size(); ++j)
            if (sv(j) > 1e-12) out.col(filled++) = R.col(j);
        if (filled < N.cols()) {
            // photon-free remainder
            const Eigen::MatrixXd rest = R.rightCols(N.cols() - filled);
            const Eigen::MatrixXd canon = detail::canonical_span(rest);
            out.rightCols(canon.cols()) = canon;
            filled += canon.cols();
        }
    } else if (N.cols() > 0) {
        out = detail::canonical_span(N);
        filled = out.cols();
    }
    out.conservativeResize(n, filled);

    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        Eigen::Index pivot = -1;
        if (np > 0) {
            Eigen::Index r;
            if (out.col(j).head(np).cwiseAbs().maxCoeff(&r) > 1e-12) pivot = r;
        }
        for (Eigen::Index i = 0; pivot < 0 && i < n; ++i)
            if (std::abs(out(i, j)) > 1e-12) pivot = i;
        if (pivot >= 0 && out(pivot, j) < 0.0) out.col(j) = -out.col(j);
    }
    return {std::move(out), hn};
}

inline DarkSubspace dark_subspace(const ModeHamiltonian& h, double tol = kDefaultNullTol) {
    return dark_subspace(h.h, h.basis.photons(), tol);
}

// |h v| / |h|, the relative dark-mode residual.
inline double relative_residual(const ModeHamiltonian& h, const Eigen::VectorXd& v) {
    const double hn = h.h.operatorNorm();
    return hn == 0.0 ? 0.0 : (h.h * v).norm() / hn;
}

}  // namespace eitmem
