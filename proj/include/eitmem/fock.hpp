// fock.hpp - brute-force truncated Fock-space oracle.
//
// Everything here is built from creation/annihilation matrices on the product space
// with per-mode cutoff n_max, independently of the mode-space machinery, so it can
// certify dark polaritons, the multinomial dark-state expansion, cat-state entropies,
// and the mode-level propagator.

#pragma once

#include "eitmem/catstate.hpp"
#include "eitmem/errors.hpp"
#include "eitmem/polariton.hpp"
#include "eitmem/system.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace eitmem::fock {

using cplx = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<cplx>;
using StateVector = Eigen::VectorXcd;

inline constexpr std::size_t kDimensionGuard = 200000;

class FockSpace {
public:
    FockSpace(std::size_t modes, std::size_t cutoff) : modes_(modes), cutoff_(cutoff) {
        double d = 1.0;
        for (std::size_t i = 0; i < modes; ++i) d *= static_cast<double>(cutoff + 1);
        if (d > static_cast<double>(kDimensionGuard))
            throw GuardError("Fock space (" + std::to_string(cutoff + 1) + ")^" + std::to_string(modes) +
                             " exceeds the dimension guard of " + std::to_string(kDimensionGuard));
        dim_ = static_cast<std::size_t>(d);
    }

    std::size_t modes() const { return modes_; }
    std::size_t cutoff() const { return cutoff_; }
    Eigen::Index dimension() const { return static_cast<Eigen::Index>(dim_); }

    // Mode 0 is the least significant digit.
    std::size_t stride(std::size_t mode) const {
        std::size_t s = 1;
        for (std::size_t i = 0; i < mode; ++i) s *= cutoff_ + 1;
        return s;
    }
    std::size_t occupation(Eigen::Index index, std::size_t mode) const {
        return (static_cast<std::size_t>(index) / stride(mode)) % (cutoff_ + 1);
    }
    std::vector<std::size_t> occupations(Eigen::Index index) const {
        std::vector<std::size_t> n(modes_);
        auto u = static_cast<std::size_t>(index);
        for (std::size_t i = 0; i < modes_; ++i) {
            n[i] = u % (cutoff_ + 1);
            u /= cutoff_ + 1;
        }
        return n;
    }
    Eigen::Index index(const std::vector<std::size_t>& n) const {
        std::size_t idx = 0;
        for (std::size_t i = modes_; i-- > 0;) idx = idx * (cutoff_ + 1) + n.at(i);
        return static_cast<Eigen::Index>(idx);
    }

private:
    std::size_t modes_, cutoff_, dim_{0};
};

inline SparseOp annihilation(const FockSpace& space, std::size_t mode) {
    std::vector<Eigen::Triplet<cplx>> trip;
    const auto s = static_cast<Eigen::Index>(space.stride(mode));
    for (Eigen::Index i = 0; i < space.dimension(); ++i) {
        const std::size_t n = space.occupation(i, mode);
        if (n > 0) trip.emplace_back(i - s, i, std::sqrt(static_cast<double>(n)));
    }
    SparseOp a(space.dimension(), space.dimension());
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
}

inline SparseOp creation(const FockSpace& space, std::size_t mode) { return annihilation(space, mode).adjoint(); }

inline SparseOp number(const FockSpace& space, std::size_t mode) {
    return creation(space, mode) * annihilation(space, mode);
}

// V = sum_edges g sqrt(N) a_p A_s^dag + sum_s Omega_s(t) A_s^dag C_s + h.c.
inline SparseOp build_V_with_controls(const SystemConfig& c, const std::vector<double>& omegas,
                                      const FockSpace& space) {
    const ModeBasis basis(c);
    if (space.modes() != static_cast<std::size_t>(basis.size()))
        throw DimensionError("build_V: Fock space has " + std::to_string(space.modes()) + " modes, config needs " +
                             std::to_string(basis.size()));
    auto mode = [](Eigen::Index i) { return static_cast<std::size_t>(i); };
    SparseOp V(space.dimension(), space.dimension());
    for (const auto& e : c.edges) {
        const std::size_t p = c.photon_index(e.photon), s = c.ensemble_index(e.ensemble);
        const double G = e.g * std::sqrt(c.ensembles[s].N);
        const SparseOp term = creation(space, mode(basis.optical(s))) * annihilation(space, mode(basis.photon(p)));
        V += G * term;
    }
    for (std::size_t s = 0; s < c.m(); ++s) {
        const SparseOp term = creation(space, mode(basis.optical(s))) * annihilation(space, mode(basis.spin(s)));
        V += omegas.at(s) * term;
    }
    const SparseOp Vd = V.adjoint();
    SparseOp out = V + Vd;
    out.makeCompressed();
    return out;
}

inline SparseOp build_V(const SystemConfig& c, double t, const FockSpace& space) {
    require_valid(c);
    return build_V_with_controls(c, controls_at(c, t), space);
}

inline StateVector vacuum(const FockSpace& space) {
    StateVector v = StateVector::Zero(space.dimension());
    v(0) = 1.0;
    return v;
}

// d^dag = sum_i v_i b_i^dag for the polariton d = sum_i conj(v_i) b_i.
inline SparseOp polariton_creation(const FockSpace& space, const Eigen::VectorXcd& v) {
    SparseOp D(space.dimension(), space.dimension());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v(i) != cplx{0.0, 0.0}) D += v(i) * creation(space, static_cast<std::size_t>(i));
    return D;
}

// |D_n> = (d^dag)^n |0> / sqrt(n!)
inline StateVector dark_state(const FockSpace& space, const Eigen::VectorXcd& v, std::size_t n) {
    if (n > space.cutoff())
        throw TruncationError("dark_state: n=" + std::to_string(n) + " exceeds cutoff " +
                              std::to_string(space.cutoff()));
    const SparseOp D = polariton_creation(space, v);
    StateVector psi = vacuum(space);
    for (std::size_t k = 1; k <= n; ++k) psi = (D * psi) / std::sqrt(static_cast<double>(k));
    return psi;
}

inline StateVector dark_state(const FockSpace& space, const DspVector& d, std::size_t n) {
    return dark_state(space, d.v.cast<cplx>().eval(), n);
}

// Closed-form two-ensemble dark state, summing over k photons, j spin waves in C_2,
// l = n - k - j in C_1. Modes ordered (a, A1, A2, C1, C2).
inline StateVector dark_state_two_ensemble_closed_form(const FockSpace& space, const MixingAngles& a,
                                                       std::size_t n) {
    if (space.modes() != 5 || a.phi.size() != 1)
        throw DimensionError("closed-form dark state needs a 5-mode space and two ensembles");
    if (n > space.cutoff()) throw TruncationError("closed-form dark state: n exceeds cutoff");
    auto fact = [](std::size_t x) { return std::tgamma(static_cast<double>(x) + 1.0); };
    const double ct = std::cos(a.theta), st = std::sin(a.theta);
    const double cp = std::cos(a.phi[0]), sp = std::sin(a.phi[0]);
    StateVector psi = StateVector::Zero(space.dimension());
    for (std::size_t k = 0; k <= n; ++k) {
        for (std::size_t j = 0; j <= n - k; ++j) {
            const std::size_t l = n - k - j;
            const double coef = std::sqrt(fact(n) / (fact(k) * fact(l) * fact(j))) * std::pow(ct, k) *
                                std::pow(-st, static_cast<double>(n - k)) * std::pow(sp, j) * std::pow(cp, l);
            psi(space.index({k, 0, 0, l, j})) += coef;
        }
    }
    return psi;
}

// Max coefficient deviation between the operator-power and closed-form dark states.
inline double check_Dn_expansion(const FockSpace& space, const MixingAngles& a, std::size_t n) {
    const StateVector lhs = dark_state(space, dsp_vector_line(a), n);
    const StateVector rhs = dark_state_two_ensemble_closed_form(space, a, n);
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

// max_j |[A, B] e_j| over basis states whose occupations are all <= cutoff - order,
// i.e. away from the truncation edge.
inline double commutator_residual(const FockSpace& space, const SparseOp& A, const SparseOp& B,
                                  std::size_t order = 2) {
    const SparseOp C = A * B - B * A;
    const std::size_t limit = space.cutoff() >= order ? space.cutoff() - order : 0;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < C.outerSize(); ++j) {
        bool inside = true;
        for (std::size_t m = 0; m < space.modes() && inside; ++m) inside = space.occupation(j, m) <= limit;
        if (!inside) continue;
        double col = 0.0;
        for (SparseOp::InnerIterator it(C, j); it; ++it) col += std::norm(it.value());
        worst = std::max(worst, std::sqrt(col));
    }
    return worst;
}

// ---------------------------------------------------------------- coherent states

inline StateVector coherent_state(const FockSpace& space, const Eigen::VectorXcd& alphas) {
    if (static_cast<std::size_t>(alphas.size()) != space.modes())
        throw DimensionError("coherent_state: amplitude count differs from mode count");
    std::vector<std::vector<cplx>> per_mode(space.modes());
    for (std::size_t m = 0; m < space.modes(); ++m) {
        const cplx a = alphas(static_cast<Eigen::Index>(m));
        per_mode[m].resize(space.cutoff() + 1);
        cplx c = std::exp(-0.5 * std::norm(a));
        for (std::size_t n = 0; n <= space.cutoff(); ++n) {
            per_mode[m][n] = c;
            c *= a / std::sqrt(static_cast<double>(n + 1));
        }
    }
    StateVector psi(space.dimension());
    for (Eigen::Index i = 0; i < space.dimension(); ++i) {
        cplx v{1.0, 0.0};
        auto u = static_cast<std::size_t>(i);
        for (std::size_t m = 0; m < space.modes(); ++m) {
            v *= per_mode[m][u % (space.cutoff() + 1)];
            u /= space.cutoff() + 1;
        }
        psi(i) = v;
    }
    return psi;
}

inline StateVector cat_state_vector(const FockSpace& space, const CatState& s) {
    StateVector psi = StateVector::Zero(space.dimension());
    for (const auto& b : s.branches) psi += b.weight * coherent_state(space, b.alphas);
    return psi;
}

// ---------------------------------------------------------------- evolution

// exp(-i H tau) psi for Hermitian H by Lanczos: project onto the Krylov space of psi,
// exponentiate the tridiagonal matrix, stop once the tail estimate drops below tol.
// The interval is halved when the Krylov space saturates.
inline StateVector expm_multiply(const SparseOp& H, const StateVector& psi, double tau, double tol = 1e-15,
                                 int max_krylov = 60) {
    const double beta0 = psi.norm();
    if (beta0 == 0.0 || tau == 0.0) return psi;
    std::vector<StateVector> basis{psi / beta0};
    std::vector<double> alpha, beta;
    for (int j = 0; j < max_krylov; ++j) {
        StateVector w = H * basis[static_cast<std::size_t>(j)];
        alpha.push_back(basis[static_cast<std::size_t>(j)].dot(w).real());
        for (const auto& q : basis) w -= q.dot(w) * q;  // full reorthogonalization
        const double b = w.norm();
        const auto m = static_cast<Eigen::Index>(alpha.size());
        Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            Tm(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < m) Tm(i, i + 1) = Tm(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm);
        const Eigen::VectorXcd ph = (es.eigenvalues() * cplx(0.0, -tau)).array().exp().matrix();
        const Eigen::VectorXcd c =
            es.eigenvectors().cast<cplx>() * ph.asDiagonal() * es.eigenvectors().row(0).transpose().cast<cplx>();
        if (b * std::abs(c(m - 1)) < tol || b < 1e-14 * beta0) {
            StateVector out = StateVector::Zero(psi.size());
            for (Eigen::Index i = 0; i < m; ++i) out += c(i) * basis[static_cast<std::size_t>(i)];
            return beta0 * out;
        }
        beta.push_back(b);
        basis.push_back(w / b);
    }
    return expm_multiply(H, expm_multiply(H, psi, tau / 2, tol, max_krylov), tau / 2, tol, max_krylov);
}

// Static and per-control pieces of V, assembled once for repeated evaluation.
class FockHamiltonian {
public:
    FockHamiltonian(const SystemConfig& c, const FockSpace& space) : config_(c) {
        require_valid(c);
        std::vector<double> zeros(c.m(), 0.0);
        static_ = build_V_with_controls(c, zeros, space);
        for (std::size_t s = 0; s < c.m(); ++s) {
            std::vector<double> unit(c.m(), 0.0);
            unit[s] = 1.0;
            SparseOp term = build_V_with_controls(c, unit, space) - static_;
            term.prune(cplx{0.0, 0.0});
            control_terms_.push_back(std::move(term));
        }
    }

    SparseOp at(double t) const {
        const auto w = controls_at(config_, t);
        SparseOp V = static_;
        for (std::size_t s = 0; s < w.size(); ++s)
            if (w[s] != 0.0) V += w[s] * control_terms_[s];
        return V;
    }

private:
    SystemConfig config_;
    SparseOp static_;
    std::vector<SparseOp> control_terms_;
};

// Midpoint-exponential integration, stepping exactly like eitmem::propagate.
inline StateVector schrodinger_evolve(const SystemConfig& c, double T, std::size_t steps, const FockSpace& space,
                                      StateVector initial) {
    if (steps < 1) throw DomainError("schrodinger_evolve: steps must be >= 1");
    const FockHamiltonian V(c, space);
    const double dt = T / static_cast<double>(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double tm = (static_cast<double>(k) + 0.5) * dt;
        initial = expm_multiply(V.at(tm), initial, dt);
    }
    return initial;
}

// ---------------------------------------------------------------- entropies

// Reduced density matrix on `keep` (trace-normalized), by explicit partial trace.
inline Eigen::MatrixXcd partial_trace(const FockSpace& space, const StateVector& psi, const ModeSubset& keep) {
    const std::size_t d = space.cutoff() + 1;
    std::size_t dk = 1;
    for (std::size_t i = 0; i < keep.size(); ++i) dk *= d;
    const std::size_t dr = static_cast<std::size_t>(space.dimension()) / dk;
    std::vector<bool> kept(space.modes(), false);
    for (auto m : keep) kept.at(static_cast<std::size_t>(m)) = true;
    Eigen::MatrixXcd Psi = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dr));
    for (Eigen::Index i = 0; i < space.dimension(); ++i) {
        const auto n = space.occupations(i);
        std::size_t ik = 0, ir = 0;
        for (auto m : keep) ik = ik * d + n[static_cast<std::size_t>(m)];
        for (std::size_t m = 0; m < space.modes(); ++m)
            if (!kept[m]) ir = ir * d + n[m];
        Psi(static_cast<Eigen::Index>(ik), static_cast<Eigen::Index>(ir)) = psi(i);
    }
    Eigen::MatrixXcd rho = Psi * Psi.adjoint();
    return rho / rho.trace().real();
}

inline double fock_partial_trace_entropy(const FockSpace& space, const StateVector& psi, const ModeSubset& keep) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(partial_trace(space, psi, keep), Eigen::EigenvaluesOnly);
    double e = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double l = es.eigenvalues()(i);
        if (l > 1e-300) e -= l * std::log(l);
    }
    return std::max(e, 0.0);
}

// 1 - |<a|b>|^2 / (|a|^2 |b|^2)
inline double infidelity(const StateVector& a, const StateVector& b) {
    return std::max(0.0, 1.0 - std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm()));
}

}  // namespace eitmem::fock
