#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pwvem/element.hpp"
#include "pwvem/mesh.hpp"
#include "pwvem/system.hpp"

namespace pwvem {

enum class ExactKind { Hankel, BesselSingular, PlaneWaveSum };

/// Analytic Helmholtz solutions used as references.
class ExactSolution {
 public:
  /// H_0^(1)(k |x - source|).
  static ExactSolution hankel(double k, const Vec2& source = Vec2(-0.25, 0.0));
  /// J_xi(k r) cos(xi theta), polar coordinates about `origin`.
  static ExactSolution bessel_singular(double k, double xi, const Vec2& origin = Vec2(0.0, 0.5));
  /// sum_l amp_l exp(i k d_l . (x - anchor)).
  static ExactSolution plane_waves(double k, std::vector<Vec2> directions,
                                   std::vector<cplx> amplitudes,
                                   const Vec2& anchor = Vec2::Zero());

  cplx value(const Vec2& x) const;
  CVec2 gradient(const Vec2& x) const;

  ExactKind kind() const { return kind_; }
  double k() const { return k_; }
  double order() const { return order_; }
  const Vec2& center() const { return center_; }
  std::string describe() const;

 private:
  ExactKind kind_ = ExactKind::Hankel;
  double k_ = 1.0;
  double order_ = 0.0;
  Vec2 center_ = Vec2::Zero();
  std::vector<Vec2> directions_;
  std::vector<cplx> amplitudes_;
};

/// g(x, nu) = grad u . nu + i k u. Throws InvalidArgument when a Hankel
/// source lies in the closed unit square.
BoundaryDatum impedance_datum(const ExactSolution& exact, double k);

struct ErrorReport {
  double l2_rel_error = 0.0;
  double h = 0.0;
  int ndof = 0;
  double k = 0.0;
  int p = 0;
  Variant variant = Variant::PWVEM;
  std::optional<double> rate;
  double residual = 0.0;
};

/// Selects how u_hp is evaluated inside elements.
enum class Evaluation {
  Automatic,  // exact basis on triangular cells (any variant), projection elsewhere
  Projection,
  ExactBasis,
};

/// ||u - u_hp||_0 / ||u||_0. `omega_scale` multiplies the quadrature
/// frequency (2k by default) for refinement checks.
ErrorReport l2_relative_error(const PolygonalMesh& mesh, const WaveContext& ctx,
                              const DiscreteSolution& solution, const ExactSolution& exact,
                              Evaluation evaluation = Evaluation::Automatic,
                              double omega_scale = 1.0);

/// Fills in rate = log(e_{i-1}/e_i) / log(h_{i-1}/h_i). Throws
/// InvalidArgument unless h is strictly decreasing.
std::vector<ErrorReport> rate_table(std::vector<ErrorReport> series);

struct CsvRow {
  std::string experiment;
  ErrorReport report;
  double offset_angle = 0.0;
  std::string mesh_spec;
};

inline constexpr const char* kCsvHeader =
    "experiment,variant,k,p,h,ndof,l2_rel_error,rate,residual,offset_angle,mesh_spec";

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);
void write_csv(const std::filesystem::path& path, const std::vector<CsvRow>& rows);

/// Named (x, y) series, one "x y" pair per line, blank-line separated
/// blocks introduced by "# name".
struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};
void write_plot_data(const std::filesystem::path& path, const std::vector<PlotSeries>& series);

}  // namespace pwvem
