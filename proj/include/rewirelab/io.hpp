#pragma once

#include <filesystem>
#include <optional>

#include "rewirelab/graph.hpp"

namespace rwl::io {

/// Reads `u v` pairs, one per line. `#` starts a comment line, ids are 0-based.
/// The node count is max id + 1 unless `num_nodes` is larger.
Graph load_edge_list(const std::filesystem::path &path, std::optional<count> num_nodes = {});
Graph parse_edge_list(std::string_view text, std::optional<count> num_nodes = {});
void save_edge_list(const Graph &g, const std::filesystem::path &path);

/// CSV without header, one row per node.
FeatureMatrix load_features(const std::filesystem::path &path);
FeatureMatrix parse_features(std::string_view text);
void save_features(const FeatureMatrix &x, const std::filesystem::path &path);

/// One integer per line.
LabelVector load_labels(const std::filesystem::path &path);
LabelVector parse_labels(std::string_view text);
void save_labels(const LabelVector &y, const std::filesystem::path &path);

/// Throws ValidationError when the row count does not match the graph.
void check_paired(const Graph &g, const FeatureMatrix &x);
void check_paired(const Graph &g, const LabelVector &y);
void check_paired(const Graph &g, const Partition &p);

std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view content);

} // namespace rwl::io
