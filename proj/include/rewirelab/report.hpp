#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "rewirelab/graph.hpp"

namespace rwl {

/// Structured run report:
/// {method, params, seed, metrics, delta:{added, deleted}, timings_ms, provenance}.
struct Report {
    std::string method;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    std::uint64_t seed = 0;
    nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
    std::vector<Edge> added;
    std::vector<Edge> deleted;
    std::map<std::string, double> timings_ms;
    nlohmann::ordered_json provenance = nlohmann::ordered_json::object();

    nlohmann::ordered_json to_json() const;
    static Report from_json(const nlohmann::ordered_json &j);

    bool operator==(const Report &) const = default;
};

void save_report(const Report &r, const std::filesystem::path &path);
Report load_report(const std::filesystem::path &path);

/// Seeds the delta fields and provenance-derived params of a report.
Report report_from_delta(const EdgeDelta &d);

} // namespace rwl
