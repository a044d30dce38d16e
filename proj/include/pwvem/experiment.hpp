#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pwvem/config.hpp"
#include "pwvem/mesh.hpp"

namespace pwvem {

enum class MeshFamily { Structured, Voronoi, Chevron, File };

/// One entry of a mesh spec. `size` is n per side (structured, chevron) or
/// the cell count (voronoi); `path` is used for files.
struct MeshItem {
  MeshFamily family = MeshFamily::Structured;
  int size = 0;
  std::filesystem::path path;
};

/// "family:a,b,c", several joined by ';'. Throws UsageError for unknown
/// families, empty lists or missing files.
std::vector<MeshItem> parse_mesh_spec(const std::string& spec);

/// Self-contained description of one mesh, e.g. "voronoi:64:seed=1:lloyd=20".
std::string describe(const MeshItem& item, unsigned long long seed, int lloyd);
PolygonalMesh build_mesh(const MeshItem& item, unsigned long long seed, int lloyd);

struct ExperimentResult {
  std::vector<CsvRow> rows;
  std::vector<PlotSeries> plots;
  std::vector<std::string> notes;  // human-readable summary lines
  std::string cell_table;          // per-cell CSV (infsup only)
};

/// Run the configured series. Module errors are rethrown as
/// std::runtime_error carrying the (mesh, h, k, p) being solved.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// run_experiment plus output files: <out>/<experiment>.csv (or
/// <experiment>_cells.csv), <out>/<experiment>.dat and the resolved config
/// <out>/config.txt.
ExperimentResult run_and_write(const ExperimentConfig& config, std::ostream& log);

}  // namespace pwvem
