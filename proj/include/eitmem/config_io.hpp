// config_io.hpp - JSON scenario documents.
//
//   {
//     "ensembles": [{"id": "E1", "g": 1.0, "N": 1.0}, ...],
//     "photons":   [{"id": "P1", "couplings": [{"ensemble": "E1", "g": 1.0}, ...]}],
//     "controls":  {"E1": {"kind": "storage_ramp", "omega_max": 2000, "T": 3200,
//                          "ratio_group": "storage"}, ...},
//     "input_state": {"kind": "cat2", "alpha0": 1.0, "beta0": -1.0, "sign": -1},
//     "run": {"T": 3200, "steps": 80000, "fock_cutoff": 8}
//   }
//
// A coupling without "g" inherits the ensemble's g. Complex amplitudes may be given as
// [re, im]. Custom schedules use "samples": [[t, Omega], ...].

#pragma once

#include "eitmem/catstate.hpp"
#include "eitmem/errors.hpp"
#include "eitmem/schedule.hpp"
#include "eitmem/system.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace eitmem {

struct InputState {
    enum class Kind { coherent, cat2 };
    Kind kind{Kind::coherent};
    std::complex<double> alpha0{1.0, 0.0};
    std::complex<double> beta0{-1.0, 0.0};
    double sign{+1.0};

    // Every photon mode carries alpha0 (and beta0 in the second branch); atoms start empty.
    CatState to_cat_state(const ModeBasis& basis) const {
        Eigen::VectorXcd a = Eigen::VectorXcd::Zero(basis.size());
        Eigen::VectorXcd b = a;
        for (auto p : basis.photon_modes()) {
            a(p) = alpha0;
            b(p) = beta0;
        }
        if (kind == Kind::coherent) return CatState::coherent(a);
        return CatState::cat2(a, b, sign);
    }
};

struct RunDefaults {
    std::optional<double> T;
    std::optional<std::size_t> steps;
    std::optional<std::size_t> fock_cutoff;
    std::vector<double> sweep;
};

struct ScenarioConfig {
    SystemConfig system;
    InputState input;
    RunDefaults run;
};

namespace detail {

using nlohmann::json;

inline std::complex<double> parse_complex(const json& j, const std::string& what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError(what + " must be a number or [re, im]");
}

inline ControlSchedule parse_schedule(const json& j, const std::string& id) {
    const std::string kind = j.value("kind", "constant");
    std::optional<std::string> group;
    if (j.contains("ratio_group") && !j["ratio_group"].is_null()) group = j["ratio_group"].get<std::string>();
    if (kind == "constant") return ControlSchedule::constant(j.value("omega_max", 0.0), j.value("T", 1.0), group);
    if (kind == "storage_ramp")
        return ControlSchedule::storage_ramp(j.value("omega_max", 0.0), j.value("T", 1.0), group);
    if (kind == "custom_samples") {
        std::vector<std::pair<double, double>> samples;
        for (const auto& s : j.at("samples")) samples.emplace_back(s.at(0).get<double>(), s.at(1).get<double>());
        return ControlSchedule::custom(std::move(samples), group);
    }
    throw ConfigError("control of '" + id + "': unknown kind '" + kind + "'");
}

}  // namespace detail

inline ScenarioConfig parse_scenario_config(const nlohmann::json& j) {
    using nlohmann::json;
    ScenarioConfig out;
    SystemConfig& c = out.system;
    try {
        for (const auto& e : j.at("ensembles"))
            c.ensembles.push_back({e.at("id").get<std::string>(), e.value("g", 1.0), e.value("N", 1.0)});
        for (const auto& p : j.at("photons")) {
            const std::string pid = p.at("id").get<std::string>();
            c.photons.push_back(pid);
            for (const auto& cp : p.value("couplings", json::array())) {
                const std::string eid = cp.at("ensemble").get<std::string>();
                double g = 1.0;
                if (cp.contains("g")) {
                    g = cp["g"].get<double>();
                } else {
                    for (const auto& e : c.ensembles)
                        if (e.id == eid) g = e.g;
                }
                c.edges.push_back({pid, eid, g});
            }
        }
        for (const auto& [id, s] : j.at("controls").items()) c.controls[id] = detail::parse_schedule(s, id);

        if (j.contains("input_state")) {
            const auto& in = j["input_state"];
            const std::string kind = in.value("kind", "coherent");
            if (kind == "coherent") out.input.kind = InputState::Kind::coherent;
            else if (kind == "cat2") out.input.kind = InputState::Kind::cat2;
            else throw ConfigError("input_state: unknown kind '" + kind + "'");
            if (in.contains("alpha0")) out.input.alpha0 = detail::parse_complex(in["alpha0"], "input_state.alpha0");
            out.input.beta0 = in.contains("beta0") ? detail::parse_complex(in["beta0"], "input_state.beta0")
                                                   : -out.input.alpha0;
            out.input.sign = in.value("sign", 1.0);
            if (out.input.sign != 1.0 && out.input.sign != -1.0) throw ConfigError("input_state.sign must be +1 or -1");
        }
        if (j.contains("run")) {
            const auto& r = j["run"];
            if (r.contains("T")) out.run.T = r["T"].get<double>();
            if (r.contains("steps")) out.run.steps = r["steps"].get<std::size_t>();
            if (r.contains("fock_cutoff")) out.run.fock_cutoff = r["fock_cutoff"].get<std::size_t>();
            if (r.contains("sweep")) out.run.sweep = r["sweep"].get<std::vector<double>>();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config JSON: ") + e.what());
    }
    return out;
}

inline ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    try {
        return parse_scenario_config(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
}

inline nlohmann::json to_json(const ScenarioConfig& sc) {
    using nlohmann::json;
    const SystemConfig& c = sc.system;
    json j;
    j["ensembles"] = json::array();
    for (const auto& e : c.ensembles) j["ensembles"].push_back({{"id", e.id}, {"g", e.g}, {"N", e.N}});
    j["photons"] = json::array();
    for (const auto& p : c.photons) {
        json cps = json::array();
        for (const auto& e : c.edges)
            if (e.photon == p) cps.push_back({{"ensemble", e.ensemble}, {"g", e.g}});
        j["photons"].push_back({{"id", p}, {"couplings", cps}});
    }
    j["controls"] = json::object();
    for (const auto& [id, s] : c.controls) {
        json js = {{"kind", to_string(s.kind)}, {"omega_max", s.omega_max}, {"T", s.T}};
        if (s.ratio_group) js["ratio_group"] = *s.ratio_group;
        if (s.kind == ControlSchedule::Kind::custom_samples) {
            js["samples"] = json::array();
            for (const auto& [t, w] : s.samples) js["samples"].push_back({t, w});
        }
        j["controls"][id] = js;
    }
    auto cx = [](std::complex<double> z) { return z.imag() == 0.0 ? json(z.real()) : json::array({z.real(), z.imag()}); };
    j["input_state"] = {{"kind", sc.input.kind == InputState::Kind::coherent ? "coherent" : "cat2"},
                        {"alpha0", cx(sc.input.alpha0)}};
    if (sc.input.kind == InputState::Kind::cat2) {
        j["input_state"]["beta0"] = cx(sc.input.beta0);
        j["input_state"]["sign"] = sc.input.sign;
    }
    json run = json::object();
    if (sc.run.T) run["T"] = *sc.run.T;
    if (sc.run.steps) run["steps"] = *sc.run.steps;
    if (sc.run.fock_cutoff) run["fock_cutoff"] = *sc.run.fock_cutoff;
    if (!sc.run.sweep.empty()) run["sweep"] = sc.run.sweep;
    j["run"] = run;
    return j;
}

}  // namespace eitmem
