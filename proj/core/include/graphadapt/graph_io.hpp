#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "graphadapt/graph.hpp"

namespace graphadapt {

// Edge-list text format: header line `N M`, then M lines `i j w` (0-indexed,
// each undirected edge once). Weights are written with round-trip precision.
void write_edge_list(std::ostream& out, const Graph& graph);
Graph read_edge_list(std::istream& in);
void save_edge_list(const std::filesystem::path& path, const Graph& graph);
Graph load_edge_list(const std::filesystem::path& path);

// Coordinates format: one `i x y` line per vertex, any order, ids 0..N-1.
std::vector<Point2> read_coordinates(std::istream& in);
std::vector<Point2> load_coordinates(const std::filesystem::path& path);

}  // namespace graphadapt
