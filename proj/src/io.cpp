#include "rewirelab/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rewirelab/errors.hpp"

namespace rwl::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

template <class F>
void for_each_line(std::string_view text, F &&f) {
    std::size_t lineno = 0;
    while (!text.empty()) {
        ++lineno;
        auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        f(trim(line), lineno);
        if (nl == std::string_view::npos)
            break;
        text.remove_prefix(nl + 1);
    }
}

std::vector<std::string_view> split(std::string_view s, char sep, bool whitespace) {
    std::vector<std::string_view> out;
    if (whitespace) {
        std::size_t i = 0;
        while (i < s.size()) {
            while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
                ++i;
            auto j = i;
            while (j < s.size() && s[j] != ' ' && s[j] != '\t')
                ++j;
            if (j > i)
                out.push_back(s.substr(i, j - i));
            i = j;
        }
        return out;
    }
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view tok, std::size_t lineno) {
    T value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError("line " + std::to_string(lineno) + ": cannot parse '" +
                             std::string(tok) + "'",
                         lineno);
    return value;
}

} // namespace

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path &path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << content;
}

Graph parse_edge_list(std::string_view text, std::optional<count> num_nodes) {
    std::vector<Edge> edges;
    count n = num_nodes.value_or(0);
    for_each_line(text, [&](std::string_view line, std::size_t lineno) {
        if (line.empty())
            return;
        if (line.front() == '#') {
            // Header written by save_edge_list keeps trailing isolated nodes.
            auto toks = split(line.substr(1), ' ', true);
            count declared = 0;
            if (toks.size() >= 2 && toks[0] == "nodes" &&
                std::from_chars(toks[1].data(), toks[1].data() + toks[1].size(), declared).ec ==
                    std::errc())
                n = std::max(n, declared);
            return;
        }
        auto toks = split(line, ' ', true);
        if (toks.size() != 2)
            throw ParseError("line " + std::to_string(lineno) + ": expected 2 fields, got " +
                                 std::to_string(toks.size()),
                             lineno);
        auto u = parse_number<node>(toks[0], lineno);
        auto v = parse_number<node>(toks[1], lineno);
        if (u == v)
            throw ValidationError("line " + std::to_string(lineno) + ": self-loop on node " +
                                  std::to_string(u));
        n = std::max<count>(n, std::max(u, v) + 1);
        edges.emplace_back(u, v);
    });
    return Graph(n, std::move(edges));
}

Graph load_edge_list(const std::filesystem::path &path, std::optional<count> num_nodes) {
    return parse_edge_list(read_file(path), num_nodes);
}

void save_edge_list(const Graph &g, const std::filesystem::path &path) {
    std::ostringstream os;
    os << "# nodes " << g.num_nodes() << " edges " << g.num_edges() << "\n";
    for (const auto &e : g.edges())
        os << e.u << ' ' << e.v << '\n';
    write_file(path, os.str());
}

FeatureMatrix parse_features(std::string_view text) {
    std::vector<double> values;
    count rows = 0;
    count dim = 0;
    for_each_line(text, [&](std::string_view line, std::size_t lineno) {
        if (line.empty())
            return;
        auto toks = split(line, ',', false);
        if (rows == 0)
            dim = toks.size();
        else if (toks.size() != dim)
            throw ParseError("line " + std::to_string(lineno) + ": expected " +
                                 std::to_string(dim) + " columns, got " +
                                 std::to_string(toks.size()),
                             lineno);
        for (auto tok : toks)
            values.push_back(parse_number<double>(tok, lineno));
        ++rows;
    });
    return FeatureMatrix(rows, dim, std::move(values));
}

FeatureMatrix load_features(const std::filesystem::path &path) {
    return parse_features(read_file(path));
}

void save_features(const FeatureMatrix &x, const std::filesystem::path &path) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (node i = 0; i < x.rows(); ++i) {
        auto r = x.row(i);
        for (count j = 0; j < r.size(); ++j)
            os << (j ? "," : "") << r[j];
        os << '\n';
    }
    write_file(path, os.str());
}

LabelVector parse_labels(std::string_view text) {
    std::vector<std::uint32_t> labels;
    for_each_line(text, [&](std::string_view line, std::size_t lineno) {
        if (line.empty())
            return;
        labels.push_back(parse_number<std::uint32_t>(line, lineno));
    });
    return LabelVector(std::move(labels));
}

LabelVector load_labels(const std::filesystem::path &path) { return parse_labels(read_file(path)); }

void save_labels(const LabelVector &y, const std::filesystem::path &path) {
    std::ostringstream os;
    for (auto l : y.values())
        os << l << '\n';
    write_file(path, os.str());
}

void check_paired(const Graph &g, const FeatureMatrix &x) {
    if (x.rows() != g.num_nodes())
        throw ValidationError("features have " + std::to_string(x.rows()) + " rows, graph has " +
                              std::to_string(g.num_nodes()) + " nodes");
}

void check_paired(const Graph &g, const LabelVector &y) {
    if (y.size() != g.num_nodes())
        throw ValidationError("labels have " + std::to_string(y.size()) + " entries, graph has " +
                              std::to_string(g.num_nodes()) + " nodes");
}

void check_paired(const Graph &g, const Partition &p) {
    if (p.size() != g.num_nodes())
        throw ValidationError("partition covers " + std::to_string(p.size()) +
                              " nodes, graph has " + std::to_string(g.num_nodes()));
}

} // namespace rwl::io
