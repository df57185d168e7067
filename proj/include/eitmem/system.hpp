// system.hpp - ensembles, photon modes, coupling graph, and the quadratic mode Hamiltonian.
//
// In the large-N, low-excitation regime each ensemble sigma carries two bosonic modes:
// the optical excitation A_sigma (b <-> a coherence) and the spin wave C_sigma
// (b <-> c coherence). The control term becomes Omega_sigma A_sigma^dag C_sigma and the
// interaction V = sum_ij b_i^dag h_ij b_j is fixed by the real symmetric matrix h over
//
//     [ photons (config order) | A_1 .. A_m | C_1 .. C_m ].

#pragma once

#include "eitmem/errors.hpp"
#include "eitmem/schedule.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace eitmem {

struct EnsembleSpec {
    std::string id;
    double g{1.0};  // default coupling for edges that do not carry their own g
    double N{1.0};  // atom number, enters only as sqrt(N)
};

struct CouplingEdge {
    std::string photon;
    std::string ensemble;
    double g{1.0};
};

struct SystemConfig {
    std::vector<EnsembleSpec> ensembles;
    std::vector<std::string> photons;
    std::vector<CouplingEdge> edges;
    std::map<std::string, ControlSchedule> controls;

    std::size_t m() const { return ensembles.size(); }
    std::size_t ensemble_index(const std::string& id) const {
        for (std::size_t i = 0; i < ensembles.size(); ++i)
            if (ensembles[i].id == id) return i;
        throw ConfigError("unknown ensemble id '" + id + "'");
    }
    std::size_t photon_index(const std::string& id) const {
        for (std::size_t i = 0; i < photons.size(); ++i)
            if (photons[i] == id) return i;
        throw ConfigError("unknown photon id '" + id + "'");
    }
};

// ---------------------------------------------------------------- mode basis

struct Mode {
    enum class Kind { Photon, Optical, Spin };
    Kind kind;
    std::size_t index;  // photon index or ensemble index
};

class ModeBasis {
public:
    ModeBasis() = default;
    ModeBasis(std::size_t photons, std::size_t ensembles) : n_photons_(photons), m_(ensembles) {}
    explicit ModeBasis(const SystemConfig& c) : ModeBasis(c.photons.size(), c.ensembles.size()) {}

    Eigen::Index size() const { return static_cast<Eigen::Index>(n_photons_ + 2 * m_); }
    std::size_t photons() const { return n_photons_; }
    std::size_t ensembles() const { return m_; }

    Eigen::Index photon(std::size_t p) const { return static_cast<Eigen::Index>(p); }
    Eigen::Index optical(std::size_t s) const { return static_cast<Eigen::Index>(n_photons_ + s); }
    Eigen::Index spin(std::size_t s) const { return static_cast<Eigen::Index>(n_photons_ + m_ + s); }

    Mode mode(Eigen::Index i) const {
        const auto u = static_cast<std::size_t>(i);
        if (u < n_photons_) return {Mode::Kind::Photon, u};
        if (u < n_photons_ + m_) return {Mode::Kind::Optical, u - n_photons_};
        return {Mode::Kind::Spin, u - n_photons_ - m_};
    }

    std::vector<Eigen::Index> photon_modes() const { return range(0, n_photons_); }
    std::vector<Eigen::Index> optical_modes() const { return range(n_photons_, m_); }
    std::vector<Eigen::Index> spin_modes() const { return range(n_photons_ + m_, m_); }

    // Column label used in CSV traces: a1, A1, C1, ...
    std::string label(Eigen::Index i) const {
        const Mode md = mode(i);
        const char* prefix = md.kind == Mode::Kind::Photon ? "a" : md.kind == Mode::Kind::Optical ? "A" : "C";
        return prefix + std::to_string(md.index + 1);
    }

private:
    static std::vector<Eigen::Index> range(std::size_t start, std::size_t n) {
        std::vector<Eigen::Index> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<Eigen::Index>(start + i);
        return v;
    }
    std::size_t n_photons_{0};
    std::size_t m_{0};
};

// ---------------------------------------------------------------- validation

inline std::vector<std::string> validate_config(const SystemConfig& c) {
    std::vector<std::string> out;
    if (c.ensembles.empty()) out.emplace_back("config has no ensembles");
    if (c.photons.empty()) out.emplace_back("config has no photon modes");

    std::set<std::string> ens_ids;
    for (const auto& e : c.ensembles) {
        if (!ens_ids.insert(e.id).second) out.push_back("duplicate ensemble id '" + e.id + "'");
        if (!(e.N > 0.0) || !std::isfinite(e.N))
            out.push_back("ensemble '" + e.id + "' must have finite N > 0");
        if (!std::isfinite(e.g)) out.push_back("ensemble '" + e.id + "' has non-finite g");
    }
    std::set<std::string> ph_ids;
    for (const auto& p : c.photons)
        if (!ph_ids.insert(p).second) out.push_back("duplicate photon id '" + p + "'");

    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& e : c.edges) {
        if (!ph_ids.count(e.photon))
            out.push_back("edge (" + e.photon + "," + e.ensemble + ") references unknown photon '" + e.photon + "'");
        if (!ens_ids.count(e.ensemble))
            out.push_back("edge (" + e.photon + "," + e.ensemble + ") references unknown ensemble '" + e.ensemble + "'");
        if (!std::isfinite(e.g)) out.push_back("edge (" + e.photon + "," + e.ensemble + ") has non-finite g");
        if (!seen.insert({e.photon, e.ensemble}).second)
            out.push_back("duplicate edge (" + e.photon + "," + e.ensemble + ")");
    }

    for (const auto& e : c.ensembles) {
        auto it = c.controls.find(e.id);
        if (it == c.controls.end()) {
            out.push_back("ensemble '" + e.id + "' has no control schedule");
            continue;
        }
        for (const auto& v : schedule_violations(it->second))
            out.push_back("control of '" + e.id + "': " + v);
    }
    for (const auto& [id, s] : c.controls)
        if (!ens_ids.count(id)) out.push_back("control schedule for unknown ensemble '" + id + "'");
    return out;
}

inline void require_valid(const SystemConfig& c) {
    const auto v = validate_config(c);
    if (!v.empty()) throw ConfigError("invalid config: " + v.front());
}

// Largest g*sqrt(N) over all edges; times are measured in units of its inverse.
inline double rate_unit(const SystemConfig& c) {
    double r = 0.0;
    for (const auto& e : c.edges)
        r = std::max(r, std::abs(e.g) * std::sqrt(c.ensembles[c.ensemble_index(e.ensemble)].N));
    return r;
}

// ---------------------------------------------------------------- topology

enum class Topology { StraightLine, CrossLine, General };

// Straight line: one photon coupled to every ensemble.
// Cross line: photon 1 -> {E1, E2}, photon 2 -> {E1, E3}, in config order.
inline Topology classify(const SystemConfig& c) {
    const std::size_t m = c.m();
    auto has = [&](std::size_t p, std::size_t s) {
        return std::any_of(c.edges.begin(), c.edges.end(), [&](const CouplingEdge& e) {
            return e.photon == c.photons[p] && e.ensemble == c.ensembles[s].id;
        });
    };
    if (c.photons.size() == 1 && c.edges.size() == m && m >= 1) {
        bool all = true;
        for (std::size_t s = 0; s < m; ++s) all = all && has(0, s);
        if (all) return Topology::StraightLine;
    }
    if (c.photons.size() == 2 && m == 3 && c.edges.size() == 4 && has(0, 0) && has(0, 1) && has(1, 0) &&
        has(1, 2))
        return Topology::CrossLine;
    return Topology::General;
}

// g*sqrt(N) for the (photon p, ensemble s) edge, 0 when absent.
inline double coupling(const SystemConfig& c, std::size_t p, std::size_t s) {
    for (const auto& e : c.edges)
        if (e.photon == c.photons[p] && e.ensemble == c.ensembles[s].id)
            return e.g * std::sqrt(c.ensembles[s].N);
    return 0.0;
}

inline std::vector<double> controls_at(const SystemConfig& c, double t) {
    std::vector<double> w(c.m());
    for (std::size_t s = 0; s < c.m(); ++s) w[s] = omega(c.controls.at(c.ensembles[s].id), t);
    return w;
}

// ---------------------------------------------------------------- Hamiltonian

struct ModeHamiltonian {
    Eigen::MatrixXd h;  // real symmetric; complex entries never arise at resonance
    double t{0.0};
    ModeBasis basis;

    Eigen::MatrixXcd complex() const { return h.cast<std::complex<double>>(); }
};

// Hamiltonian with explicit control values, bypassing the schedules.
inline ModeHamiltonian build_hamiltonian_with_controls(const SystemConfig& c, const std::vector<double>& omegas,
                                                       double t = 0.0) {
    const ModeBasis basis(c);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(basis.size(), basis.size());
    for (const auto& e : c.edges) {
        const std::size_t p = c.photon_index(e.photon);
        const std::size_t s = c.ensemble_index(e.ensemble);
        h(basis.photon(p), basis.optical(s)) = e.g * std::sqrt(c.ensembles[s].N);
    }
    for (std::size_t s = 0; s < c.m(); ++s) h(basis.optical(s), basis.spin(s)) = omegas.at(s);
    // Mirror the upper triangle so h == h^T bit for bit.
    h.triangularView<Eigen::StrictlyLower>() = h.transpose();
    return {std::move(h), t, basis};
}

inline ModeHamiltonian build_hamiltonian(const SystemConfig& c, double t) {
    require_valid(c);
    return build_hamiltonian_with_controls(c, controls_at(c, t), t);
}

// Every schedule's duration set to T.
inline SystemConfig with_duration(SystemConfig c, double T) {
    for (auto& [id, s] : c.controls) s = with_duration(s, T);
    return c;
}

// ---------------------------------------------------------------- builders

// One photon "P1" coupled to ensembles E1..Em with the given g*sqrt(N) (N = 1).
inline SystemConfig straight_line(const std::vector<double>& couplings, const std::vector<ControlSchedule>& controls) {
    SystemConfig c;
    c.photons = {"P1"};
    for (std::size_t s = 0; s < couplings.size(); ++s) {
        const std::string id = "E" + std::to_string(s + 1);
        c.ensembles.push_back({id, couplings[s], 1.0});
        c.edges.push_back({"P1", id, couplings[s]});
        c.controls[id] = controls.at(s);
    }
    return c;
}

// Two photons; P1 -> {E1, E2} with (g1, g1p), P2 -> {E1, E3} with (g2, g2p). N = 1.
inline SystemConfig cross_line(double g1, double g1p, double g2, double g2p,
                               const std::vector<ControlSchedule>& controls) {
    SystemConfig c;
    c.photons = {"P1", "P2"};
    for (int s = 1; s <= 3; ++s) c.ensembles.push_back({"E" + std::to_string(s), 1.0, 1.0});
    c.edges = {{"P1", "E1", g1}, {"P1", "E2", g1p}, {"P2", "E1", g2}, {"P2", "E3", g2p}};
    for (std::size_t s = 0; s < 3; ++s) c.controls[c.ensembles[s].id] = controls.at(s);
    return c;
}

}  // namespace eitmem
