// catstate.hpp - finite superpositions of multi-mode coherent states.
//
// A CatState sum_i w_i |alpha_i> is stored unnormalized. All linear algebra happens in
// the span of its (at most four) branches: with the Gram matrix S_ij = <alpha_i|alpha_j>
// and a factor X (X^dag X = S), kets become coordinate columns of X and every reduced
// density matrix is a small dense matrix. No Fock truncation is involved.

#pragma once

#include "eitmem/errors.hpp"
#include "eitmem/propagator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace eitmem {

using cplx = std::complex<double>;
using ModeSubset = std::vector<Eigen::Index>;

inline constexpr std::size_t kMaxBranches = 4;

struct CoherentBranch {
    cplx weight{1.0, 0.0};
    Eigen::VectorXcd alphas;
};

struct CatState {
    std::vector<CoherentBranch> branches;

    Eigen::Index modes() const { return branches.empty() ? 0 : branches.front().alphas.size(); }
    std::size_t size() const { return branches.size(); }

    static CatState coherent(Eigen::VectorXcd alphas) { return {{{cplx{1.0, 0.0}, std::move(alphas)}}}; }
    // (|a> + sign |b>), unnormalized.
    static CatState cat2(Eigen::VectorXcd a, Eigen::VectorXcd b, double sign) {
        return {{{cplx{1.0, 0.0}, std::move(a)}, {cplx{sign, 0.0}, std::move(b)}}};
    }
};

inline void check_cat_state(const CatState& s) {
    if (s.branches.empty()) throw ShapeError("cat state needs at least one branch");
    if (s.branches.size() > kMaxBranches)
        throw ShapeError("cat state supports at most " + std::to_string(kMaxBranches) + " branches");
    for (const auto& b : s.branches) {
        if (b.alphas.size() != s.modes()) throw DimensionError("cat-state branches have different mode counts");
        if (!b.alphas.allFinite() || !std::isfinite(b.weight.real()) || !std::isfinite(b.weight.imag()))
            throw ShapeError("cat-state entries must be finite");
    }
}

// <beta|alpha> for multi-mode coherent states.
inline cplx coherent_overlap(const Eigen::VectorXcd& alpha, const Eigen::VectorXcd& beta) {
    if (alpha.size() != beta.size()) throw DimensionError("coherent_overlap: length mismatch");
    const cplx e = -0.5 * alpha.squaredNorm() - 0.5 * beta.squaredNorm() + beta.dot(alpha);
    return std::exp(e);
}

inline Eigen::VectorXcd restrict_modes(const Eigen::VectorXcd& a, const ModeSubset& modes) {
    Eigen::VectorXcd out(static_cast<Eigen::Index>(modes.size()));
    for (std::size_t i = 0; i < modes.size(); ++i) out(static_cast<Eigen::Index>(i)) = a(modes[i]);
    return out;
}

inline CatState restrict_modes(const CatState& s, const ModeSubset& modes) {
    CatState out;
    for (const auto& b : s.branches) out.branches.push_back({b.weight, restrict_modes(b.alphas, modes)});
    return out;
}

inline ModeSubset complement(const ModeSubset& modes, Eigen::Index n) {
    ModeSubset out;
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::find(modes.begin(), modes.end(), i) == modes.end()) out.push_back(i);
    return out;
}

// S_ij = <alpha_i|alpha_j>
inline Eigen::MatrixXcd gram(const CatState& s) {
    const auto k = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXcd G(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            G(i, j) = coherent_overlap(s.branches[static_cast<std::size_t>(j)].alphas,
                                       s.branches[static_cast<std::size_t>(i)].alphas);
    return G;
}

inline Eigen::VectorXcd weights(const CatState& s) {
    Eigen::VectorXcd w(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) w(static_cast<Eigen::Index>(i)) = s.branches[i].weight;
    return w;
}

// <a|b>
inline cplx inner(const CatState& a, const CatState& b) {
    if (a.modes() != b.modes()) throw DimensionError("inner: mode-count mismatch");
    cplx acc{0.0, 0.0};
    for (const auto& x : a.branches)
        for (const auto& y : b.branches) acc += std::conj(x.weight) * y.weight * coherent_overlap(y.alphas, x.alphas);
    return acc;
}

inline double norm_squared(const CatState& s) {
    const Eigen::VectorXcd w = weights(s);
    return std::max(0.0, (w.adjoint() * gram(s) * w)(0, 0).real());
}

namespace detail {

inline double require_positive_norm(const CatState& s, const char* who) {
    check_cat_state(s);
    const double n2 = norm_squared(s);
    double scale = 0.0;
    for (const auto& b : s.branches) scale += std::abs(b.weight);
    if (!(n2 > 1e-14 * scale * scale))
        throw DegenerateStateError(std::string(who) + ": state has zero norm (degenerate branches)");
    return n2;
}

// Hermitian PSD eigenvalues with round-off negatives clipped.
inline Eigen::VectorXd clipped_eigenvalues(const Eigen::MatrixXcd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = es.eigenvalues().reverse();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -1e-8) throw DegenerateStateError("density matrix is not positive semidefinite");
        ev(i) = std::max(ev(i), 0.0);
    }
    return ev;
}

}  // namespace detail

inline CatState normalized(const CatState& s) {
    const double n = std::sqrt(detail::require_positive_norm(s, "normalized"));
    CatState out = s;
    for (auto& b : out.branches) b.weight /= n;
    return out;
}

inline CatState apply_unitary(const CatState& s, const Eigen::MatrixXcd& M) {
    check_cat_state(s);
    if (M.cols() != s.modes() || M.rows() != s.modes()) throw DimensionError("apply_unitary: dimension mismatch");
    CatState out;
    for (const auto& b : s.branches) out.branches.push_back({b.weight, M * b.alphas});
    return out;
}

inline CatState apply_unitary(const CatState& s, const ModeUnitary& U) { return apply_unitary(s, U.M); }

// |<target|state>|^2 / (|state|^2 |target|^2)
inline double fidelity(const CatState& state, const CatState& target) {
    const double ns = detail::require_positive_norm(state, "fidelity");
    const double nt = detail::require_positive_norm(target, "fidelity");
    return std::clamp(std::norm(inner(target, state)) / (ns * nt), 0.0, 1.0);
}

// Coordinates X (rank x k) of the branch kets restricted to `modes` in an orthonormal
// basis of their span: X^dag X = S.
inline Eigen::MatrixXcd local_coordinates(const CatState& s, const ModeSubset& modes) {
    const Eigen::MatrixXcd S = gram(restrict_modes(s, modes));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
    const double smax = std::max(es.eigenvalues().maxCoeff(), 0.0);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index r = es.eigenvalues().size() - 1; r >= 0; --r)
        if (es.eigenvalues()(r) > 1e-14 * smax) keep.push_back(r);
    Eigen::MatrixXcd X(static_cast<Eigen::Index>(keep.size()), S.cols());
    for (std::size_t q = 0; q < keep.size(); ++q)
        X.row(static_cast<Eigen::Index>(q)) =
            std::sqrt(es.eigenvalues()(keep[q])) * es.eigenvectors().col(keep[q]).adjoint();
    return X;
}

struct ReducedDensity {
    Eigen::MatrixXcd coefficients;  // rho = sum_ij C_ij |alpha_i^K><alpha_j^K|, trace-normalized
    Eigen::MatrixXcd gram;          // S_ij = <alpha_i^K|alpha_j^K>
    Eigen::MatrixXcd whitened;      // rho in an orthonormal basis of the branch span
    Eigen::VectorXd eigenvalues;    // descending, clipped at 0
};

namespace detail {

// C_ij = w_i conj(w_j) <R_j|R_i> / |psi|^2, the trace-normalized coefficient matrix of
// the state reduced onto `keep` (R = all other modes).
inline Eigen::MatrixXcd reduced_coefficients(const CatState& s, const ModeSubset& keep, double n2) {
    const ModeSubset rest = complement(keep, s.modes());
    const auto k = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXcd C(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            const auto& bi = s.branches[static_cast<std::size_t>(i)];
            const auto& bj = s.branches[static_cast<std::size_t>(j)];
            const cplx env = rest.empty() ? cplx{1.0, 0.0}
                                          : coherent_overlap(restrict_modes(bi.alphas, rest),
                                                             restrict_modes(bj.alphas, rest));
            C(i, j) = bi.weight * std::conj(bj.weight) * env / n2;
        }
    }
    return C;
}

inline void check_subset(const ModeSubset& modes, Eigen::Index n, const char* who) {
    if (modes.empty()) throw ShapeError(std::string(who) + ": mode subset is empty");
    for (auto i : modes)
        if (i < 0 || i >= n) throw DimensionError(std::string(who) + ": mode index out of range");
}

}  // namespace detail

inline ReducedDensity reduced_density(const CatState& s, const ModeSubset& keep) {
    const double n2 = detail::require_positive_norm(s, "reduced_density");
    detail::check_subset(keep, s.modes(), "reduced_density");
    ReducedDensity r;
    r.coefficients = detail::reduced_coefficients(s, keep, n2);
    r.gram = gram(restrict_modes(s, keep));
    const Eigen::MatrixXcd X = local_coordinates(s, keep);
    r.whitened = X * r.coefficients * X.adjoint();
    r.eigenvalues = detail::clipped_eigenvalues(r.whitened);
    return r;
}

// Von Neumann entropy (natural log) of the reduced state on `keep`.
inline double entanglement_entropy(const CatState& s, const ModeSubset& keep) {
    double e = 0.0;
    for (double l : reduced_density(s, keep).eigenvalues)
        if (l > 0.0) e -= l * std::log(l);
    return std::max(e, 0.0);
}

// Logarithmic negativity ln |rho_AB^{T_B}|_1 between parties A and B, every other
// mode traced out. Computed exactly in the whitened branch bases of A and B.
inline double reduced_two_party_negativity(const CatState& s, const ModeSubset& party_a, const ModeSubset& party_b) {
    const double n2 = detail::require_positive_norm(s, "reduced_two_party_negativity");
    detail::check_subset(party_a, s.modes(), "reduced_two_party_negativity");
    detail::check_subset(party_b, s.modes(), "reduced_two_party_negativity");
    ModeSubset ab = party_a;
    ab.insert(ab.end(), party_b.begin(), party_b.end());
    const Eigen::MatrixXcd C = detail::reduced_coefficients(s, ab, n2);
    const Eigen::MatrixXcd XA = local_coordinates(s, party_a), XB = local_coordinates(s, party_b);
    const Eigen::Index ra = XA.rows(), rb = XB.rows(), k = C.rows();
    Eigen::MatrixXcd Y(ra * rb, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index a = 0; a < ra; ++a)
            for (Eigen::Index b = 0; b < rb; ++b) Y(a * rb + b, i) = XA(a, i) * XB(b, i);
    const Eigen::MatrixXcd rho = Y * C * Y.adjoint();
    Eigen::MatrixXcd pt(ra * rb, ra * rb);
    for (Eigen::Index a = 0; a < ra; ++a)
        for (Eigen::Index b = 0; b < rb; ++b)
            for (Eigen::Index a2 = 0; a2 < ra; ++a2)
                for (Eigen::Index b2 = 0; b2 < rb; ++b2) pt(a * rb + b, a2 * rb + b2) = rho(a * rb + b2, a2 * rb + b);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt, Eigen::EigenvaluesOnly);
    return std::max(0.0, std::log(es.eigenvalues().cwiseAbs().sum()));
}

// Three-mode convenience: negativity between the two modes left after tracing `traced`.
inline double reduced_two_party_negativity(const CatState& s, Eigen::Index traced) {
    if (s.modes() != 3) throw ShapeError("reduced_two_party_negativity: expects a three-mode state");
    ModeSubset rest = complement({traced}, 3);
    return reduced_two_party_negativity(s, {rest[0]}, {rest[1]});
}

// ---------------------------------------------------------------- GHZ / W split

// (|a,a,a> + s |b,b,b>) written in the local basis |+-> ∝ |a> +- |b>:
//   s = +1:  xi |+++> + zeta (|+--> + |-+-> + |--+>)
//   s = -1:  xi |---> + zeta (|-++> + |+-+> + |++->)
struct GhzDecomposition {
    int parity{+1};
    cplx alpha, beta;      // per-mode branch amplitudes
    cplx xi, zeta;         // coefficients for the normalized state
    cplx plus_minus_overlap;  // <+|->, zero for real amplitudes
    double residual{0.0};  // norm of state minus the two-term form
};

inline GhzDecomposition ghz_decompose(const CatState& s) {
    check_cat_state(s);
    if (s.size() != 2 || s.modes() != 3) throw ShapeError("ghz_decompose: needs two branches over three modes");
    const auto& b0 = s.branches[0];
    const auto& b1 = s.branches[1];
    for (const auto* b : {&b0, &b1})
        for (Eigen::Index i = 1; i < 3; ++i)
            if (std::abs(b->alphas(i) - b->alphas(0)) > 1e-12 * (1.0 + std::abs(b->alphas(0))))
                throw ShapeError("ghz_decompose: branch amplitudes differ between modes");
    const cplx ratio = b1.weight / b0.weight;
    int parity;
    if (std::abs(ratio - 1.0) < 1e-12) parity = +1;
    else if (std::abs(ratio + 1.0) < 1e-12) parity = -1;
    else throw ShapeError("ghz_decompose: branch weights must be equal or opposite");

    const cplx a = b0.alphas(0), b = b1.alphas(0);
    const Eigen::VectorXcd va = Eigen::VectorXcd::Constant(1, a), vb = Eigen::VectorXcd::Constant(1, b);
    const cplx ab = coherent_overlap(vb, va);  // <a|b>
    const double np2 = 2.0 + 2.0 * ab.real(), nm2 = 2.0 - 2.0 * ab.real();
    if (nm2 < 1e-12) throw DegenerateStateError("ghz_decompose: |a> = |b>, basis state |-> has zero norm");
    const double np = std::sqrt(np2), nm = std::sqrt(nm2);
    // |a> = (np|+> + nm|->)/2, |b> = (np|+> - nm|->)/2; label 0 = '+', 1 = '-'
    const cplx ca[2] = {np / 2, nm / 2}, cb[2] = {np / 2, -nm / 2};
    const double n = std::sqrt(norm_squared(s));
    if (!(n > 0.0)) throw DegenerateStateError("ghz_decompose: zero-norm state");
    cplx c[8];
    for (int idx = 0; idx < 8; ++idx) {
        const int s1 = (idx >> 2) & 1, s2 = (idx >> 1) & 1, s3 = idx & 1;
        c[idx] = (b0.weight * ca[s1] * ca[s2] * ca[s3] + b1.weight * cb[s1] * cb[s2] * cb[s3]) / n;
    }
    GhzDecomposition out;
    out.parity = parity;
    out.alpha = a;
    out.beta = b;
    // <+|-> = (<a|+<b|)(|a>-|b>)/(np nm)
    out.plus_minus_overlap = (1.0 - ab + std::conj(ab) - 1.0) / (np * nm);
    const int head = parity > 0 ? 0 : 7;                  // |+++> or |--->
    const std::array<int, 3> w_idx = parity > 0 ? std::array<int, 3>{3, 5, 6} : std::array<int, 3>{4, 2, 1};
    out.xi = c[head];
    out.zeta = c[w_idx[0]];
    cplx d[8];
    for (int i = 0; i < 8; ++i) d[i] = c[i];
    d[head] -= out.xi;
    for (int i : w_idx) d[i] -= out.zeta;
    // |d|^2 with the local Gram matrix L = [[1, <+|->], [<-|+>, 1]] on every factor
    const cplx L[2][2] = {{1.0, out.plus_minus_overlap}, {std::conj(out.plus_minus_overlap), 1.0}};
    cplx r2{0.0, 0.0};
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            r2 += std::conj(d[i]) * d[j] * L[(i >> 2) & 1][(j >> 2) & 1] * L[(i >> 1) & 1][(j >> 1) & 1] *
                  L[i & 1][j & 1];
    out.residual = std::sqrt(std::max(0.0, r2.real()));
    return out;
}

}  // namespace eitmem
