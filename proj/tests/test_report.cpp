#include "eitmem/report.hpp"
#include "eitmem/scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

using namespace eitmem;

namespace {

ScenarioConfig short_storage(double phi, InputState in) {
    ScenarioConfig sc = presets::storage_line({1.0, 1.0}, {phi}, in, 50.0, 200.0);
    sc.run.steps = 4000;
    return sc;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Format, SeventeenDigitsAndSpecials) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
    EXPECT_EQ(detail::json_number(std::numeric_limits<double>::quiet_NaN()), "\"NaN\"");
    EXPECT_EQ(detail::json_number(-std::numeric_limits<double>::infinity()), "\"-Infinity\"");
}

TEST(Format, CsvLayout) {
    const Table t{{"t", "x"}, {{0.0, 1.5}, {0.5, -2.0}}};
    EXPECT_EQ(trace_csv(t), "t,x\n0,1.5\n0.5,-2\n");
}

TEST(Format, SummaryJsonParses) {
    RunReport r;
    r.scenario = "store";
    r.note("mode", "a \"quoted\" note");
    r.metric("fidelity", 0.9995);
    r.verdicts.push_back(verdict_ge("A4", "fidelity", 0.9995, 0.999));
    r.verdicts.push_back(verdict_in("A8", "ratio", 5.0, 3.5, 4.5));
    const auto j = nlohmann::json::parse(summary_json(r));
    EXPECT_EQ(j["scenario"], "store");
    EXPECT_EQ(j["mode"], "a \"quoted\" note");
    EXPECT_DOUBLE_EQ(j["fidelity"].get<double>(), 0.9995);
    EXPECT_FALSE(j["passed"].get<bool>());
    ASSERT_EQ(j["verdicts"].size(), 2u);
    EXPECT_TRUE(j["verdicts"][0]["pass"].get<bool>());
    EXPECT_EQ(j["verdicts"][1]["relation"], "in");
}

TEST(Verdicts, Relations) {
    EXPECT_TRUE(verdict_le("A", "x", 1.0, 1.0).pass);
    EXPECT_FALSE(verdict_lt("A", "x", 1.0, 1.0).pass);
    EXPECT_FALSE(verdict_gt("A", "x", 0.0, 0.0).pass);
    EXPECT_TRUE(verdict_in("A", "x", 4.5, 3.5, 4.5).pass);
    EXPECT_FALSE(verdict_le("A", "x", std::numeric_limits<double>::quiet_NaN(), 1.0).pass);
}

TEST(Scenario, ParseNames) {
    for (const char* n : {"verify", "store", "entangle2", "ghz3", "crossline", "sweep", "oracle"})
        EXPECT_STREQ(to_string(parse_scenario(n)), n);
    EXPECT_THROW(parse_scenario("retrieve"), std::invalid_argument);
}

TEST(Scenario, TraceHasOneRowPerStep) {
    RunSpec spec;
    spec.scenario = Scenario::store;
    spec.config = short_storage(std::numbers::pi / 4, presets::coherent(1.0));
    spec.steps = 400;
    const auto r = run(spec);
    ASSERT_EQ(r.trace.rows.size(), 401u);
    EXPECT_EQ(r.trace.header.front(), "t");
    EXPECT_EQ(r.trace.header[1], "theta");
    EXPECT_EQ(r.trace.header[2], "phi_1");
    EXPECT_EQ(r.trace.header.back(), "dark_overlap");
    EXPECT_DOUBLE_EQ(r.trace.rows.back()[0], 200.0);
    EXPECT_NEAR(r.trace.rows.back()[1], std::numbers::pi / 2, 1e-15);
    for (const auto& row : r.trace.rows) EXPECT_EQ(row.size(), r.trace.header.size());
}

TEST(Scenario, StorageSplitsByPhi) {
    RunSpec spec;
    spec.scenario = Scenario::store;
    spec.config = short_storage(0.3, presets::coherent(1.5));
    spec.trace = false;
    const auto r = run(spec);
    EXPECT_NEAR(r.metric_value("spin_magnitude_1"), 1.5 * std::cos(0.3), 1e-2);
    EXPECT_NEAR(r.metric_value("spin_magnitude_2"), 1.5 * std::sin(0.3), 1e-2);
    EXPECT_GT(r.metric_value("fidelity"), 0.99);
}

TEST(Scenario, StoredCatSignConvention) {
    // Storage maps a photon amplitude a to spin amplitudes -a w.
    RunSpec spec;
    spec.scenario = Scenario::entangle2;
    spec.config = short_storage(std::numbers::pi / 4, presets::cat(1.0, -1.0, -1.0));
    spec.trace = false;
    const auto r = run(spec);
    EXPECT_GT(r.metric_value("fidelity"), 0.99);
    EXPECT_NEAR(r.metric_value("target_entropy"), std::log(2.0), 1e-12);
}

TEST(Scenario, SweepGridIsOrderStable) {
    RunSpec spec;
    spec.scenario = Scenario::sweep;
    spec.config = short_storage(std::numbers::pi / 4, presets::coherent(1.0));
    spec.sweep = {400.0, 100.0, 200.0};
    spec.steps = 2000;  // density 10 per time unit
    const auto r = run(spec);
    ASSERT_EQ(r.trace.rows.size(), 3u);
    EXPECT_DOUBLE_EQ(r.trace.rows[0][0], 100.0);
    EXPECT_DOUBLE_EQ(r.trace.rows[2][0], 400.0);
    EXPECT_DOUBLE_EQ(r.trace.rows[1][1], 2000.0);
    EXPECT_GT(r.trace.rows[0][2], r.trace.rows[2][2]);
    const auto again = run(spec);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(again.trace.rows[i], r.trace.rows[i]);
}

TEST(Scenario, VerifyCrossLine) {
    RunSpec spec;
    spec.scenario = Scenario::verify;
    spec.config = presets::crossline_transfer(0.2, presets::coherent(1.0), 2.0, 10.0);
    spec.steps = 20;
    const auto r = run(spec);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.trace.rows.size(), 21u);
    // Every control off: three spin waves plus one optical combination.
    EXPECT_DOUBLE_EQ(r.trace.rows.back()[1], 4.0);
}

TEST(Scenario, TopologyMismatchRejected) {
    RunSpec spec;
    spec.scenario = Scenario::ghz3;
    spec.config = short_storage(0.3, presets::coherent(1.0));
    EXPECT_THROW(run(spec), ConfigError);
}

TEST(Crossline, WeakFirstControlStoresIntoFirstEnsemble) {
    // Omega_1 / Omega_2 = Omega_1 / Omega_3 = 1e-3: phi_1, phi_2 -> 0 and both photons end in C_1.
    RunSpec spec;
    spec.scenario = Scenario::crossline;
    spec.config = presets::crossline_transfer(1e-3, presets::cat(1.0, -1.0, 1.0));
    auto& ctl = spec.config.system.controls;
    ctl["E1"] = ControlSchedule::storage_ramp(100.0, 400.0, "transfer");
    ctl["E2"] = ControlSchedule::storage_ramp(1e5, 400.0, "transfer");
    ctl["E3"] = ControlSchedule::storage_ramp(1e5, 400.0, "transfer");
    spec.trace = false;
    const auto r = run(spec);
    EXPECT_NEAR(r.metric_value("phi_1_terminal"), 1e-3, 1e-9);
    EXPECT_LT(r.metric_value("fidelity"), 0.1);
    EXPECT_NEAR(r.metric_value("spin_magnitude_1"), std::sqrt(2.0), 1e-3);
    EXPECT_GT(r.metric_value("fidelity_terminal_dark_map"), 0.99);
}

TEST(Targets, TerminalDarkMapForLineIsStorageWeights) {
    const auto c = presets::storage_line({1.0, 2.0}, {0.4}, presets::coherent(1.0), 10.0, 5.0).system;
    const auto Q = terminal_dark_map(c);
    ASSERT_EQ(Q.cols(), 1);
    EXPECT_NEAR(Q(0, 0), -std::cos(0.4), 1e-12);
    EXPECT_NEAR(Q(1, 0), -std::sin(0.4), 1e-12);
}

TEST(Emit, WritesCsvAndJson) {
    RunSpec spec;
    spec.scenario = Scenario::store;
    spec.config = short_storage(std::numbers::pi / 4, presets::coherent(1.0));
    spec.steps = 100;
    const auto r = run(spec);
    const auto dir = std::filesystem::temp_directory_path() / "eitmem_emit_test";
    std::filesystem::create_directories(dir);
    const auto stem = (dir / "run").string();
    const auto paths = emit_report(r, stem);
    ASSERT_EQ(paths.size(), 2u);
    const auto csv = slurp(stem + ".csv");
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 102);
    const auto j = nlohmann::json::parse(slurp(stem + ".json"));
    EXPECT_EQ(j["scenario"], "store");
    std::filesystem::remove_all(dir);
}
