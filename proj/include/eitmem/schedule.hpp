// schedule.hpp - control-field profiles Omega_sigma(t).
//
// A storage ramp switches a control off smoothly, Omega(t) = omega_max cos^2(pi t / 2T),
// so that the mixing angle theta sweeps from near 0 to pi/2. Schedules that share a
// ratio_group keep their mutual ratios fixed, which pins the phi angles.

#pragma once

#include "eitmem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eitmem {

struct ControlSchedule {
    enum class Kind { constant, storage_ramp, custom_samples };

    Kind kind{Kind::constant};
    double omega_max{0.0};
    double T{1.0};
    std::optional<std::string> ratio_group;
    std::vector<std::pair<double, double>> samples;  // (t, Omega), custom kind only

    static ControlSchedule constant(double omega, double T,
                                    std::optional<std::string> group = std::nullopt) {
        return {Kind::constant, omega, T, std::move(group), {}};
    }
    static ControlSchedule storage_ramp(double omega_max, double T,
                                        std::optional<std::string> group = std::nullopt) {
        return {Kind::storage_ramp, omega_max, T, std::move(group), {}};
    }
    static ControlSchedule custom(std::vector<std::pair<double, double>> samples,
                                  std::optional<std::string> group = std::nullopt) {
        ControlSchedule s{Kind::custom_samples, 0.0, 0.0, std::move(group), std::move(samples)};
        if (!s.samples.empty()) {
            s.T = s.samples.back().first;
            for (const auto& [t, w] : s.samples) s.omega_max = std::max(s.omega_max, w);
        }
        return s;
    }
};

inline const char* to_string(ControlSchedule::Kind k) {
    switch (k) {
        case ControlSchedule::Kind::constant: return "constant";
        case ControlSchedule::Kind::storage_ramp: return "storage_ramp";
        case ControlSchedule::Kind::custom_samples: return "custom_samples";
    }
    return "?";
}

// Problems with a single schedule; empty when well formed.
inline std::vector<std::string> schedule_violations(const ControlSchedule& s) {
    std::vector<std::string> out;
    if (!std::isfinite(s.omega_max) || s.omega_max < 0.0)
        out.emplace_back("omega_max must be finite and >= 0");
    if (!(s.T > 0.0) || !std::isfinite(s.T)) out.emplace_back("duration T must be finite and > 0");
    if (s.kind == ControlSchedule::Kind::custom_samples) {
        if (s.samples.size() < 2) {
            out.emplace_back("custom schedule needs at least two samples");
        } else {
            if (s.samples.front().first != 0.0) out.emplace_back("custom samples must start at t=0");
            for (std::size_t i = 0; i < s.samples.size(); ++i) {
                if (!(s.samples[i].second >= 0.0) || !std::isfinite(s.samples[i].second))
                    out.emplace_back("custom sample Omega must be finite and >= 0");
                if (i > 0 && !(s.samples[i].first > s.samples[i - 1].first))
                    out.emplace_back("custom sample times must be strictly increasing");
            }
        }
    }
    return out;
}

// Rabi frequency at time t, 0 <= t <= T.
inline double omega(const ControlSchedule& s, double t) {
    // Rounding slack for t computed as k*T/steps.
    const double slack = 1e-12 * s.T;
    if (!(t >= -slack && t <= s.T + slack))
        throw DomainError("omega: t=" + std::to_string(t) + " outside [0, " + std::to_string(s.T) + "]");
    t = std::clamp(t, 0.0, s.T);
    switch (s.kind) {
        case ControlSchedule::Kind::constant:
            return s.omega_max;
        case ControlSchedule::Kind::storage_ramp: {
            if (t == s.T) return 0.0;
            const double c = std::cos(std::numbers::pi * t / (2.0 * s.T));
            return s.omega_max * c * c;
        }
        case ControlSchedule::Kind::custom_samples: {
            const auto& xs = s.samples;
            auto it = std::upper_bound(xs.begin(), xs.end(), t,
                                       [](double v, const auto& p) { return v < p.first; });
            if (it == xs.end()) return xs.back().second;
            if (it == xs.begin()) return xs.front().second;
            const auto& [t1, w1] = *it;
            const auto& [t0, w0] = *(it - 1);
            return w0 + (w1 - w0) * (t - t0) / (t1 - t0);
        }
    }
    return 0.0;
}

// Omega(t) ~ coefficient * (T - t)^order as t -> T. A schedule that vanishes
// identically near T reports coefficient 0.
struct TerminalBehavior {
    double coefficient{0.0};
    int order{0};
};

inline TerminalBehavior terminal_behavior(const ControlSchedule& s) {
    switch (s.kind) {
        case ControlSchedule::Kind::constant:
            return {s.omega_max, 0};
        case ControlSchedule::Kind::storage_ramp: {
            const double k = std::numbers::pi / (2.0 * s.T);
            return {s.omega_max * k * k, 2};
        }
        case ControlSchedule::Kind::custom_samples: {
            const auto& xs = s.samples;
            const auto& [tn, wn] = xs.back();
            if (wn > 0.0) return {wn, 0};
            const auto& [tp, wp] = xs[xs.size() - 2];
            return {wp / (tn - tp), 1};
        }
    }
    return {};
}

// Same schedule with its duration replaced; custom samples are rescaled in time.
inline ControlSchedule with_duration(ControlSchedule s, double T) {
    if (s.kind == ControlSchedule::Kind::custom_samples && s.T > 0.0) {
        const double scale = T / s.T;
        for (auto& [t, w] : s.samples) t *= scale;
    }
    s.T = T;
    return s;
}

}  // namespace eitmem
