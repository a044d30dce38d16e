#include "pwvem/postproc.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "pwvem/quadrature.hpp"

namespace pwvem {

ErrorReport l2_relative_error(const PolygonalMesh& mesh, const WaveContext& ctx,
                              const DiscreteSolution& solution, const ExactSolution& exact,
                              Evaluation evaluation, double omega_scale) {
  if (solution.projection.size() != static_cast<std::size_t>(mesh.num_cells()))
    throw InvalidArgument("solution does not match the mesh");

  // |u - u_h|^2 oscillates with up to 2k
  const double omega = 2.0 * ctx.k * omega_scale;
  double err2 = 0.0, norm2 = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto poly = mesh.cell_polygon(c);
    bool use_basis = evaluation == Evaluation::ExactBasis;
    if (evaluation == Evaluation::Automatic) use_basis = poly.size() == 3;
    double e = 0.0, n = 0.0;
    quadrature::for_each_polygon_point(poly, omega, [&](const Vec2& x, double w) {
      const cplx u = exact.value(x);
      const cplx uh = use_basis ? evaluate_triangle_basis(mesh, ctx, solution, c, x)
                                : evaluate_projection(ctx, solution, c, x);
      e += w * std::norm(u - uh);
      n += w * std::norm(u);
    });
    err2 += e;
    norm2 += n;
  }
  if (!(norm2 > 0.0)) throw DomainError("exact solution has zero L2 norm");

  ErrorReport r;
  r.l2_rel_error = std::sqrt(err2 / norm2);
  r.h = mesh.mesh_size();
  r.ndof = mesh.num_vertices() * ctx.p();
  r.k = ctx.k;
  r.p = ctx.p();
  r.variant = solution.variant;
  r.residual = solution.residual;
  return r;
}

std::vector<ErrorReport> rate_table(std::vector<ErrorReport> series) {
  for (std::size_t i = 0; i < series.size(); ++i) {
    series[i].rate.reset();
    if (i == 0) continue;
    const auto& prev = series[i - 1];
    auto& cur = series[i];
    if (!(cur.h < prev.h)) {
      std::ostringstream os;
      os << "rate table needs strictly decreasing h (entry " << i << ": " << prev.h << " -> "
         << cur.h << ")";
      throw InvalidArgument(os.str());
    }
    cur.rate = std::log(prev.l2_rel_error / cur.l2_rel_error) / std::log(prev.h / cur.h);
  }
  return series;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
  out << kCsvHeader << '\n';
  out << std::setprecision(10);
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << csv_field(row.experiment) << ',' << to_string(r.variant) << ',' << r.k << ',' << r.p
        << ',' << r.h << ',' << r.ndof << ',' << r.l2_rel_error << ',';
    if (r.rate)
      out << *r.rate;
    else
      out << '-';
    out << ',' << r.residual << ',' << row.offset_angle << ',' << csv_field(row.mesh_spec) << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const std::vector<CsvRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_csv(out, rows);
}

void write_plot_data(const std::filesystem::path& path, const std::vector<PlotSeries>& series) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << std::setprecision(10);
  bool first = true;
  for (const auto& s : series) {
    if (!first) out << "\n\n";
    first = false;
    out << "# " << s.name << '\n';
    for (const auto& [x, y] : s.points) out << x << ' ' << y << '\n';
  }
}

}  // namespace pwvem
