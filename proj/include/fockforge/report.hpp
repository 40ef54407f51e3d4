// report.hpp: check records and their JSON / CSV serialization

#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace fockforge {

struct CheckRecord {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Everything in a report is a function of its inputs and the seed; wall times are kept out.
struct Report {
    std::string task;
    std::uint64_t seed = 0;
    std::vector<CheckRecord> checks;
    std::vector<std::pair<std::string, double>> timing;  // budgets; wall times only on request
    std::vector<std::pair<std::string, double>> sizes;   // dimensions and diagnostic norms
    std::vector<std::pair<std::string, double>> tails;   // truncation-tail estimates

    // NaN residuals fail.
    void check(std::string name, double residual, double tolerance) {
        const bool ok = std::isfinite(residual) && residual <= tolerance;
        checks.push_back({std::move(name), residual, tolerance, ok});
    }
    void tail(std::string name, double value) { tails.emplace_back(std::move(name), value); }
    void size(std::string name, double value) { sizes.emplace_back(std::move(name), value); }

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
    const CheckRecord* first_failure() const {
        for (const auto& c : checks)
            if (!c.pass) return &c;
        return nullptr;
    }
};

using ordered_json = nlohmann::ordered_json;

inline ordered_json number_or_null(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

inline ordered_json to_json(const Report& r) {
    ordered_json j;
    j["task"] = r.task;
    j["seed"] = r.seed;
    j["pass"] = r.pass();
    ordered_json checks = ordered_json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"residual", number_or_null(c.residual)},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    j["checks"] = std::move(checks);
    ordered_json timing = ordered_json::object();
    for (const auto& [k, v] : r.timing) timing[k] = number_or_null(v);
    j["timing"] = std::move(timing);
    ordered_json sizes = ordered_json::object();
    for (const auto& [k, v] : r.sizes) sizes[k] = number_or_null(v);
    j["sizes"] = std::move(sizes);
    ordered_json tails = ordered_json::object();
    for (const auto& [k, v] : r.tails) tails[k] = number_or_null(v);
    j["tail_estimates"] = std::move(tails);
    return j;
}

inline std::string to_json_text(const Report& r) { return to_json(r).dump(2) + "\n"; }

// One row per check; numbers use the same shortest round-trip form as the JSON writer.
inline std::string to_csv_text(const Report& r) {
    std::ostringstream out;
    out << "task,name,residual,tolerance,pass\n";
    for (const auto& c : r.checks)
        out << r.task << ',' << c.name << ',' << number_or_null(c.residual).dump() << ','
            << ordered_json(c.tolerance).dump() << ',' << (c.pass ? "true" : "false") << '\n';
    return out.str();
}

}  // namespace fockforge
