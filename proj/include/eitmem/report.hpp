// report.hpp - run reports and their CSV / JSON serialization.
//
// Floats are written with 17 significant digits, lines end in LF, and key order is
// fixed, so identical runs produce byte-identical files.

#pragma once

#include "eitmem/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eitmem {

struct Verdict {
    std::string criterion;  // acceptance criterion id, e.g. "A4"
    std::string check;
    double value{0.0};
    std::string relation;  // "<=", ">=", ">", "in"
    double threshold{0.0};
    double threshold_hi{0.0};  // upper bound for "in"
    bool pass{false};
};

inline Verdict verdict_le(std::string crit, std::string check, double value, double bound) {
    return {std::move(crit), std::move(check), value, "<=", bound, 0.0, value <= bound};
}
inline Verdict verdict_lt(std::string crit, std::string check, double value, double bound) {
    return {std::move(crit), std::move(check), value, "<", bound, 0.0, value < bound};
}
inline Verdict verdict_ge(std::string crit, std::string check, double value, double bound) {
    return {std::move(crit), std::move(check), value, ">=", bound, 0.0, value >= bound};
}
inline Verdict verdict_gt(std::string crit, std::string check, double value, double bound) {
    return {std::move(crit), std::move(check), value, ">", bound, 0.0, value > bound};
}
inline Verdict verdict_in(std::string crit, std::string check, double value, double lo, double hi) {
    return {std::move(crit), std::move(check), value, "in", lo, hi, value >= lo && value <= hi};
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    bool empty() const { return rows.empty(); }
};

struct RunReport {
    std::string scenario;
    std::vector<std::pair<std::string, std::string>> info;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<Verdict> verdicts;
    Table trace;

    bool passed() const {
        for (const auto& v : verdicts)
            if (!v.pass) return false;
        return true;
    }
    void metric(std::string key, double v) { metrics.emplace_back(std::move(key), v); }
    void note(std::string key, std::string v) { info.emplace_back(std::move(key), std::move(v)); }
    double metric_value(const std::string& key) const {
        for (const auto& [k, v] : metrics)
            if (k == key) return v;
        throw std::out_of_range("no metric '" + key + "'");
    }
};

inline std::string format_double(double x) {
    if (std::isnan(x)) return "NaN";
    if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out + "\"";
}

// JSON has no NaN/Infinity; emit them as strings.
inline std::string json_number(double x) {
    return std::isfinite(x) ? format_double(x) : json_string(format_double(x));
}

}  // namespace detail

inline std::string trace_csv(const Table& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
    return os.str();
}

// Flat summary: scenario, info strings, metrics as top-level keys, then "verdicts".
inline std::string summary_json(const RunReport& r) {
    using detail::json_number;
    using detail::json_string;
    std::ostringstream os;
    os << "{\n  \"scenario\": " << json_string(r.scenario) << ",\n";
    for (const auto& [k, v] : r.info) os << "  " << json_string(k) << ": " << json_string(v) << ",\n";
    for (const auto& [k, v] : r.metrics) os << "  " << json_string(k) << ": " << json_number(v) << ",\n";
    os << "  \"passed\": " << (r.passed() ? "true" : "false") << ",\n";
    os << "  \"verdicts\": [";
    for (std::size_t i = 0; i < r.verdicts.size(); ++i) {
        const auto& v = r.verdicts[i];
        os << (i ? "," : "") << "\n    {\"criterion\": " << json_string(v.criterion)
           << ", \"check\": " << json_string(v.check) << ", \"value\": " << json_number(v.value)
           << ", \"relation\": " << json_string(v.relation) << ", \"threshold\": " << json_number(v.threshold);
        if (v.relation == "in") os << ", \"threshold_hi\": " << json_number(v.threshold_hi);
        os << ", \"pass\": " << (v.pass ? "true" : "false") << "}";
    }
    os << (r.verdicts.empty() ? "]\n}\n" : "\n  ]\n}\n");
    return os.str();
}

enum class ReportFormat { csv, json };

// Writes <stem>.csv (time series, when present) and/or <stem>.json; returns the paths.
inline std::vector<std::string> emit_report(const RunReport& r, const std::string& stem,
                                            std::vector<ReportFormat> formats = {ReportFormat::csv,
                                                                                 ReportFormat::json}) {
    std::vector<std::string> written;
    auto write = [&](const std::string& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + path + "'");
        out << text;
        if (!out) throw std::runtime_error("write failed for '" + path + "'");
        written.push_back(path);
    };
    for (auto f : formats) {
        if (f == ReportFormat::csv && !r.trace.empty()) write(stem + ".csv", trace_csv(r.trace));
        if (f == ReportFormat::json) write(stem + ".json", summary_json(r));
    }
    return written;
}

}  // namespace eitmem
