// propagator.hpp - exact-in-mode-space evolution under the time-dependent quadratic Hamiltonian.
//
// A number-conserving quadratic V maps the mode operators linearly, b -> M b, with
// M = T exp(-i int h dt). We approximate the time ordering by the midpoint product
//
//     M = prod_k exp(-i h(t_k + dt/2) dt),   dt = T / steps   (latest factor on the left),
//
// which is unitary by construction and second order in dt. Each factor is formed from the
// eigendecomposition of the real symmetric h.

#pragma once

#include "eitmem/errors.hpp"
#include "eitmem/polariton.hpp"
#include "eitmem/system.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eitmem {

inline constexpr std::size_t kDefaultSteps = 2000;

struct ModeUnitary {
    Eigen::MatrixXcd M;
    double T{0.0};
    std::size_t steps{0};
    ModeBasis basis;
};

// exp(-i h dt) for real symmetric h.
inline Eigen::MatrixXcd step_exponential(const Eigen::MatrixXd& h, double dt) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::VectorXcd phases =
        (es.eigenvalues() * std::complex<double>(0.0, -dt)).array().exp().matrix();
    const Eigen::MatrixXcd V = es.eigenvectors().cast<std::complex<double>>();
    return V * phases.asDiagonal() * V.transpose();
}

// max |M^dag M - I|.
inline double unitarity_drift(const Eigen::MatrixXcd& M) {
    return (M.adjoint() * M - Eigen::MatrixXcd::Identity(M.rows(), M.cols())).cwiseAbs().maxCoeff();
}

// Midpoint product for an arbitrary h(t) callable; observer(k, t_k, M_k) sees M after
// each step k = 1..steps (and k = 0 with the identity).
template <class HFn, class Observer>
Eigen::MatrixXcd propagate_fn(HFn&& h_of_t, Eigen::Index n, double T, std::size_t steps, Observer&& observer) {
    if (steps < 1) throw DomainError("propagate: steps must be >= 1");
    if (!(T >= 0.0)) throw DomainError("propagate: T must be >= 0");
    const double dt = T / static_cast<double>(steps);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n, n);
    observer(std::size_t{0}, 0.0, static_cast<const Eigen::MatrixXcd&>(M));
    for (std::size_t k = 0; k < steps; ++k) {
        const double tm = (static_cast<double>(k) + 0.5) * dt;
        M = step_exponential(h_of_t(tm), dt) * M;
        // Newton-Schulz polar step; removes round-off drift accumulated over long products
        if ((k + 1) % 4096 == 0) M = 0.5 * M * (3.0 * Eigen::MatrixXcd::Identity(n, n) - M.adjoint() * M);
        const double tk = k + 1 == steps ? T : static_cast<double>(k + 1) * dt;
        observer(k + 1, tk, static_cast<const Eigen::MatrixXcd&>(M));
    }
    return M;
}

template <class Observer>
ModeUnitary propagate(const SystemConfig& c, double T, std::size_t steps, Observer&& observer) {
    require_valid(c);
    const ModeBasis basis(c);
    auto h_of_t = [&](double t) { return build_hamiltonian_with_controls(c, controls_at(c, t), t).h; };
    Eigen::MatrixXcd M = propagate_fn(h_of_t, basis.size(), T, steps, std::forward<Observer>(observer));
    return {std::move(M), T, steps, basis};
}

inline ModeUnitary propagate(const SystemConfig& c, double T, std::size_t steps = kDefaultSteps) {
    return propagate(c, T, steps, [](std::size_t, double, const Eigen::MatrixXcd&) {});
}

// ---------------------------------------------------------------- dark following

// Dark vectors v(t_k), t_k = k T / steps, transported continuously: each sample is the
// normalized projection of the previous one onto the current dark subspace (for a
// one-dimensional subspace this is phase alignment). The subspace dimension must stay
// fixed on [0, T); at t = T, where the controls may all be off and more spin modes turn
// dark, the last vector is projected onto whatever the terminal null space is.
class DarkTracker {
public:
    DarkTracker(const SystemConfig& c, std::optional<Eigen::VectorXd> initial = std::nullopt,
                double tol = kDefaultNullTol)
        : config_(c), initial_(std::move(initial)), tol_(tol) {}

    std::vector<Eigen::VectorXd> track(double T, std::size_t steps) const {
        std::vector<Eigen::VectorXd> out;
        out.reserve(steps + 1);
        const std::size_t np = config_.photons.size();
        const auto d0 = dark_subspace(build_hamiltonian(config_, 0.0).h, np, tol_);
        if (d0.dimension() == 0) throw DegeneracyCrossingError("no dark mode at t=0");
        Eigen::VectorXd v;
        if (initial_) {
            v = d0.basis * (d0.basis.transpose() * *initial_);
            if (v.norm() < 1e-8) throw DomainError("initial vector has no overlap with the dark subspace at t=0");
            v.normalize();
        } else {
            v = d0.basis.col(0);
        }
        out.push_back(v);
        for (std::size_t k = 1; k <= steps; ++k) {
            const double t = k == steps ? T : T * static_cast<double>(k) / static_cast<double>(steps);
            const auto dk = dark_subspace(build_hamiltonian(config_, t).h, np, tol_);
            if (k < steps && dk.dimension() != d0.dimension())
                throw DegeneracyCrossingError("dark-subspace dimension changed from " +
                                              std::to_string(d0.dimension()) + " to " +
                                              std::to_string(dk.dimension()) + " at t=" + std::to_string(t));
            v = dk.basis * (dk.basis.transpose() * v);
            const double nv = v.norm();
            if (nv < 1e-8) throw DegeneracyCrossingError("tracked dark vector lost at t=" + std::to_string(t));
            v /= nv;
            out.push_back(v);
        }
        return out;
    }

private:
    SystemConfig config_;
    std::optional<Eigen::VectorXd> initial_;
    double tol_;
};

// 1 - |<v(T), M(T) v(0)>|^2 for the continuously tracked dark vector v.
inline double dark_following_infidelity(const ModeUnitary& U, const std::vector<Eigen::VectorXd>& dark) {
    const Eigen::VectorXcd v0 = dark.front().cast<std::complex<double>>();
    const Eigen::VectorXcd vT = dark.back().cast<std::complex<double>>();
    const double f = std::norm(vT.dot(U.M * v0));
    return std::max(0.0, 1.0 - f);
}

inline double dark_following_infidelity(const SystemConfig& c, double T, std::size_t steps,
                                        std::optional<Eigen::VectorXd> initial = std::nullopt) {
    const auto dark = DarkTracker(c, std::move(initial)).track(T, steps);
    return dark_following_infidelity(propagate(c, T, steps), dark);
}

}  // namespace eitmem
