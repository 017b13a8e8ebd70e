#include "graphadapt/graph_io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include "graphadapt/error.hpp"

namespace graphadapt {
namespace {

bool next_content_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void fail(int line_no, const std::string& msg) {
  throw ParseError("line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace

void write_edge_list(std::ostream& out, const Graph& graph) {
  out << graph.num_nodes() << ' ' << graph.num_edges() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& e : graph.edges()) out << e.u << ' ' << e.v << ' ' << e.weight << '\n';
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!next_content_line(in, line, line_no)) throw ParseError("edge list: missing header `N M`");
  long long n = 0, m = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> m) || n < 1 || m < 0) fail(line_no, "malformed header, expected `N M`");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  while (static_cast<long long>(edges.size()) < m) {
    if (!next_content_line(in, line, line_no)) {
      throw ParseError("edge list: header announces " + std::to_string(m) + " edges, found " +
                       std::to_string(edges.size()));
    }
    std::istringstream ls(line);
    Edge e;
    if (!(ls >> e.u >> e.v >> e.weight)) fail(line_no, "expected `i j w`");
    edges.push_back(e);
  }
  if (next_content_line(in, line, line_no)) fail(line_no, "trailing data after last edge");
  try {
    return Graph::from_edges(static_cast<int>(n), std::move(edges));
  } catch (const InvalidArgument& err) {
    throw ParseError(std::string("edge list: ") + err.what());
  }
}

void save_edge_list(const std::filesystem::path& path, const Graph& graph) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_edge_list(out, graph);
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_edge_list(in);
}

std::vector<Point2> read_coordinates(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::vector<std::pair<int, Point2>> rows;
  while (next_content_line(in, line, line_no)) {
    std::istringstream ls(line);
    int id = 0;
    Point2 p;
    if (!(ls >> id >> p.x >> p.y)) fail(line_no, "expected `i x y`");
    rows.emplace_back(id, p);
  }
  std::vector<Point2> coords(rows.size());
  std::vector<char> seen(rows.size(), 0);
  for (const auto& [id, p] : rows) {
    if (id < 0 || static_cast<std::size_t>(id) >= rows.size() || seen[id]) {
      throw ParseError("coordinates: vertex ids must be a permutation of 0..N-1");
    }
    seen[id] = 1;
    coords[id] = p;
  }
  return coords;
}

std::vector<Point2> load_coordinates(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_coordinates(in);
}

}  // namespace graphadapt
