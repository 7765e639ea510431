#include "rewirelab/report.hpp"

#include "rewirelab/errors.hpp"
#include "rewirelab/io.hpp"

namespace rwl {

namespace {

nlohmann::ordered_json edges_to_json(const std::vector<Edge> &edges) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto &e : edges)
        arr.push_back({e.u, e.v});
    return arr;
}

std::vector<Edge> edges_from_json(const nlohmann::ordered_json &j) {
    std::vector<Edge> out;
    for (const auto &pair : j) {
        if (!pair.is_array() || pair.size() != 2)
            throw ValidationError("report edge must be a [u, v] pair");
        out.emplace_back(pair[0].get<node>(), pair[1].get<node>());
    }
    return out;
}

} // namespace

nlohmann::ordered_json Report::to_json() const {
    nlohmann::ordered_json j;
    j["method"] = method;
    j["params"] = params;
    j["seed"] = seed;
    j["metrics"] = metrics;
    j["delta"] = {{"added", edges_to_json(added)}, {"deleted", edges_to_json(deleted)}};
    auto t = nlohmann::ordered_json::object();
    for (const auto &[k, v] : timings_ms)
        t[k] = v;
    j["timings_ms"] = t;
    j["provenance"] = provenance;
    return j;
}

Report Report::from_json(const nlohmann::ordered_json &j) {
    try {
        Report r;
        r.method = j.at("method").get<std::string>();
        r.params = j.value("params", nlohmann::ordered_json::object());
        r.seed = j.at("seed").get<std::uint64_t>();
        r.metrics = j.value("metrics", nlohmann::ordered_json::object());
        if (j.contains("delta")) {
            r.added = edges_from_json(j["delta"].at("added"));
            r.deleted = edges_from_json(j["delta"].at("deleted"));
        }
        if (j.contains("timings_ms"))
            for (const auto &[k, v] : j["timings_ms"].items())
                r.timings_ms[k] = v.get<double>();
        r.provenance = j.value("provenance", nlohmann::ordered_json::object());
        return r;
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("malformed report: ") + e.what());
    }
}

void save_report(const Report &r, const std::filesystem::path &path) {
    io::write_file(path, r.to_json().dump(2) + "\n");
}

Report load_report(const std::filesystem::path &path) {
    auto text = io::read_file(path);
    try {
        return Report::from_json(nlohmann::ordered_json::parse(text));
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("report is not valid JSON: ") + e.what(), 0);
    }
}

Report report_from_delta(const EdgeDelta &d) {
    Report r;
    r.method = d.provenance.method;
    r.seed = d.provenance.seed;
    for (const auto &[k, v] : d.provenance.params)
        r.params[k] = v;
    r.added = d.added;
    r.deleted = d.deleted;
    r.timings_ms = d.timings_ms;
    if (!d.warnings.empty())
        r.metrics["warnings"] = d.warnings;
    return r;
}

} // namespace rwl
