// protocol.hpp - the adiabatic storage protocol on top of the control schedules:
// ratio-locked ramps, the theta(t) trajectory, and storage-control builders.

#pragma once

#include "eitmem/errors.hpp"
#include "eitmem/polariton.hpp"
#include "eitmem/schedule.hpp"
#include "eitmem/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace eitmem {

// Largest |Omega_i(t)/Omega_j(t) - Omega_i(0)/Omega_j(0)| over the sample grid t < T,
// taken over every pair of schedules that share a ratio group.
inline double ratio_lock_deviation(const SystemConfig& c, std::size_t nsamples = 257) {
    std::map<std::string, std::vector<const ControlSchedule*>> groups;
    for (const auto& e : c.ensembles) {
        const auto& s = c.controls.at(e.id);
        if (s.ratio_group) groups[*s.ratio_group].push_back(&s);
    }
    double worst = 0.0;
    for (const auto& [name, members] : groups) {
        const double T = members.front()->T;
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = 0; j < members.size(); ++j) {
                if (i == j) continue;
                const double w0 = omega(*members[j], 0.0);
                if (w0 == 0.0) continue;
                const double r0 = omega(*members[i], 0.0) / w0;
                for (std::size_t k = 1; k < nsamples; ++k) {
                    const double t = T * static_cast<double>(k) / static_cast<double>(nsamples);
                    const double wj = omega(*members[j], t);
                    if (wj == 0.0) continue;
                    worst = std::max(worst, std::abs(omega(*members[i], t) / wj - r0));
                }
            }
        }
    }
    return worst;
}

// Throws ProtocolError unless every control is a storage ramp in one common ratio
// group with one common duration.
inline void require_ratio_locked_ramps(const SystemConfig& c) {
    std::optional<std::string> group;
    std::optional<double> T;
    for (const auto& e : c.ensembles) {
        const auto& s = c.controls.at(e.id);
        if (s.kind != ControlSchedule::Kind::storage_ramp)
            throw ProtocolError("control of '" + e.id + "' is not a storage ramp");
        if (!s.ratio_group) throw ProtocolError("control of '" + e.id + "' has no ratio_group");
        if (group && *group != *s.ratio_group)
            throw ProtocolError("controls span several ratio groups ('" + *group + "', '" + *s.ratio_group + "')");
        if (T && *T != s.T) throw ProtocolError("ratio-locked controls must share one duration");
        group = s.ratio_group;
        T = s.T;
    }
}

inline bool all_constant(const SystemConfig& c) {
    return std::all_of(c.controls.begin(), c.controls.end(),
                       [](const auto& kv) { return kv.second.kind == ControlSchedule::Kind::constant; });
}

// (t, theta) on nsamples equally spaced times covering [0, T].
inline std::vector<std::pair<double, double>> theta_trajectory(const SystemConfig& c, std::size_t nsamples) {
    detail::require_straight_line(c, "theta_trajectory");
    if (!all_constant(c)) require_ratio_locked_ramps(c);
    if (nsamples < 2) throw DomainError("theta_trajectory: need at least two samples");
    const double T = c.controls.at(c.ensembles[0].id).T;
    std::vector<std::pair<double, double>> out;
    out.reserve(nsamples);
    for (std::size_t k = 0; k < nsamples; ++k) {
        const double t = k + 1 == nsamples ? T : T * static_cast<double>(k) / static_cast<double>(nsamples - 1);
        const auto w = controls_at(c, t);
        const bool degenerate = std::any_of(w.begin(), w.end(), [](double v) { return v == 0.0; });
        out.emplace_back(t, degenerate ? terminal_mixing_angles(c).theta : mixing_angles(c, t).theta);
    }
    return out;
}

// Ratio-locked storage ramps whose terminal storage weights are proportional to
// `weights` (nonnegative). The weakest ramping control peaks at omega_max. An
// ensemble with zero weight keeps a constant control at omega_max, which drives
// its share of the stored excitation to zero as the other controls switch off.
inline std::vector<ControlSchedule> storage_controls(const std::vector<double>& couplings,
                                                     const std::vector<double>& weights, double omega_max,
                                                     double T, const std::string& group = "storage") {
    // Omega_sigma = G_sigma / (kappa w_sigma); choose kappa so min Omega = omega_max.
    double kappa = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < weights.size(); ++s)
        if (weights[s] > 0.0) kappa = std::min(kappa, couplings[s] / weights[s]);
    if (!std::isfinite(kappa)) throw ProtocolError("storage_controls: all weights are zero");
    kappa /= omega_max;
    std::vector<ControlSchedule> out;
    for (std::size_t s = 0; s < weights.size(); ++s) {
        if (weights[s] > 0.0)
            out.push_back(ControlSchedule::storage_ramp(couplings[s] / (kappa * weights[s]), T, group));
        else
            out.push_back(ControlSchedule::constant(omega_max, T));
    }
    return out;
}

// Storage weights (cos phi_1 .. phi_{m-1} hyperspherical) for given phi angles.
inline std::vector<double> weights_from_phi(const std::vector<double>& phi) {
    const auto d = dsp_vector_line({std::numbers::pi / 2, phi});
    std::vector<double> w(phi.size() + 1);
    for (std::size_t s = 0; s < w.size(); ++s) {
        w[s] = -d.v(d.basis.spin(s));
        if (std::abs(w[s]) < 1e-15) w[s] = 0.0;
    }
    return w;
}

}  // namespace eitmem
