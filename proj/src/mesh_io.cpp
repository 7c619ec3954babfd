#include "afc/mesh_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace afc {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

namespace {

std::vector<BoundaryTag> vertex_tags(const Mesh& mesh) {
  std::vector<BoundaryTag> tag(mesh.num_vertices(), BoundaryTag::None);
  for (const Edge& e : mesh.edges()) {
    if (!e.boundary()) continue;
    for (int v : e.v) {
      if (e.side.tag == BoundaryTag::Dirichlet || tag[v] == BoundaryTag::None) tag[v] = e.side.tag;
    }
  }
  return tag;
}

double parse_double(const std::string& s, int line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw MeshError("mesh reader: malformed number '" + s + "' on line " + std::to_string(line));
  return v;
}

int parse_int(const std::string& s, int line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw MeshError("mesh reader: malformed integer '" + s + "' on line " + std::to_string(line));
  return v;
}

std::vector<std::vector<std::string>> tokenize(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> row;
    for (std::string tok; ls >> tok;) row.push_back(tok);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_nodes(const Mesh& mesh, std::ostream& out) {
  const auto tags = vertex_tags(mesh);
  for (int v = 0; v < static_cast<int>(mesh.num_vertices()); ++v) {
    const Point2 p = mesh.vertex(v);
    out << v << ' ' << format_double(p.x) << ' ' << format_double(p.y);
    if (tags[v] == BoundaryTag::Dirichlet) out << " D";
    if (tags[v] == BoundaryTag::Neumann) out << " N";
    out << '\n';
  }
}

void write_elements(const Mesh& mesh, std::ostream& out) {
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const auto& t = mesh.cell(c);
    out << c << ' ' << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& nodes,
                const std::filesystem::path& elements) {
  std::ofstream n(nodes), e(elements);
  if (!n || !e) throw MeshError("write_mesh: cannot open output files");
  write_nodes(mesh, n);
  write_elements(mesh, e);
}

Mesh read_mesh(std::istream& nodes, std::istream& elements) {
  std::vector<Point2> points;
  std::vector<BoundaryTag> tags;
  int line = 0;
  for (const auto& row : tokenize(nodes)) {
    ++line;
    if (row.empty()) continue;
    if (row.size() != 3 && row.size() != 4)
      throw MeshError("node file: expected 'id x y [tag]' on line " + std::to_string(line));
    const int id = parse_int(row[0], line);
    if (id != static_cast<int>(points.size()))
      throw MeshError("node file: ids must be consecutive from 0 (line " + std::to_string(line) + ")");
    points.push_back({parse_double(row[1], line), parse_double(row[2], line)});
    BoundaryTag t = BoundaryTag::None;
    if (row.size() == 4) {
      if (row[3] == "D") t = BoundaryTag::Dirichlet;
      else if (row[3] == "N") t = BoundaryTag::Neumann;
      else throw MeshError("node file: unknown boundary tag '" + row[3] + "'");
    }
    tags.push_back(t);
  }
  std::vector<Triangle> cells;
  line = 0;
  for (const auto& row : tokenize(elements)) {
    ++line;
    if (row.empty()) continue;
    if (row.size() != 4) throw MeshError("element file: expected 'id v1 v2 v3' on line " + std::to_string(line));
    const int id = parse_int(row[0], line);
    if (id != static_cast<int>(cells.size()))
      throw MeshError("element file: ids must be consecutive from 0 (line " + std::to_string(line) + ")");
    cells.push_back({parse_int(row[1], line), parse_int(row[2], line), parse_int(row[3], line)});
  }

  // Sides are classified from the tags of their endpoints.
  std::map<std::pair<double, double>, BoundaryTag> tag_at;
  for (std::size_t i = 0; i < points.size(); ++i) tag_at[{points[i].x, points[i].y}] = tags[i];
  BoundarySpec spec;
  spec.tag = [&](Point2 a, Point2 b) {
    const BoundaryTag ta = tag_at.at({a.x, a.y}), tb = tag_at.at({b.x, b.y});
    if (ta == BoundaryTag::None || tb == BoundaryTag::None) return BoundaryTag::None;
    return (ta == BoundaryTag::Dirichlet && tb == BoundaryTag::Dirichlet) ? BoundaryTag::Dirichlet
                                                                          : BoundaryTag::Neumann;
  };
  return build_mesh(points, std::move(cells), spec);
}

Mesh read_mesh(const std::filesystem::path& nodes, const std::filesystem::path& elements) {
  std::ifstream n(nodes), e(elements);
  if (!n) throw MeshError("read_mesh: cannot open " + nodes.string());
  if (!e) throw MeshError("read_mesh: cannot open " + elements.string());
  return read_mesh(n, e);
}

}  // namespace afc
