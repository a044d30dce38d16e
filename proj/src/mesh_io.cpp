#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "pwvem/mesh.hpp"

namespace pwvem {

namespace {

constexpr const char* kMagic = "# pwvem-mesh 1";

}  // namespace

void write_mesh(const PolygonalMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << kMagic << '\n' << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << '\n';
  for (const auto& cell : mesh.cells()) {
    out << cell.size();
    for (int v : cell) out << ' ' << v;
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

PolygonalMesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  int line_no = 0;
  std::string line;
  auto next_line = [&]() -> std::istringstream {
    if (!std::getline(in, line)) throw ParseError(line_no + 1, "unexpected end of file");
    ++line_no;
    return std::istringstream(line);
  };
  auto expect_end = [&](std::istringstream& ss) {
    std::string rest;
    if (ss >> rest) throw ParseError(line_no, "unexpected trailing token '" + rest + "'");
  };

  next_line();
  if (line.rfind(kMagic, 0) != 0) throw ParseError(line_no, "missing '# pwvem-mesh 1' header");

  auto counts = next_line();
  long long nv = -1, nc = -1;
  if (!(counts >> nv >> nc) || nv < 3 || nc < 1) {
    throw ParseError(line_no, "malformed vertex/cell counts");
  }
  expect_end(counts);

  std::vector<Vec2> vertices(nv);
  for (long long i = 0; i < nv; ++i) {
    auto ss = next_line();
    double x, y;
    if (!(ss >> x >> y)) throw ParseError(line_no, "malformed vertex " + std::to_string(i));
    expect_end(ss);
    vertices[i] = Vec2(x, y);
  }

  std::vector<std::vector<int>> cells(nc);
  std::vector<int> cell_line(nc);
  for (long long c = 0; c < nc; ++c) {
    auto ss = next_line();
    cell_line[c] = line_no;
    long long m;
    if (!(ss >> m) || m < 3) throw ParseError(line_no, "malformed size for cell " + std::to_string(c));
    cells[c].resize(m);
    for (long long j = 0; j < m; ++j) {
      long long v;
      if (!(ss >> v)) throw ParseError(line_no, "cell " + std::to_string(c) + " has too few indices");
      if (v < 0 || v >= nv) {
        throw ParseError(line_no, "cell " + std::to_string(c) + ": vertex index " +
                                      std::to_string(v) + " out of range [0, " +
                                      std::to_string(nv) + ")");
      }
      cells[c][j] = static_cast<int>(v);
    }
    expect_end(ss);
    std::vector<Vec2> poly;
    for (int v : cells[c]) poly.push_back(vertices[v]);
    if (!(signed_area(poly) > 0.0)) {
      throw ParseError(line_no, "cell " + std::to_string(c) + " is not counter-clockwise");
    }
  }
  std::string extra;
  while (std::getline(in, extra)) {
    ++line_no;
    if (extra.find_first_not_of(" \t\r") != std::string::npos) {
      throw ParseError(line_no, "unexpected content after last cell");
    }
  }

  try {
    return PolygonalMesh(std::move(vertices), std::move(cells));
  } catch (const MeshError& e) {
    throw ParseError(line_no, e.what());
  }
}

}  // namespace pwvem
