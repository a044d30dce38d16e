#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "pwvem/types.hpp"

namespace pwvem::quadrature {

/// Gauss-Legendre rule on the unit segment [0, 1]. Weights sum to 1.
struct SegmentRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;  // exact for polynomials up to this degree
};

/// Rule on the reference triangle (0,0),(1,0),(0,1). Weights sum to 1/2.
struct TriangleRule {
  std::vector<Vec2> nodes;
  std::vector<double> weights;
  int order = 0;
};

inline constexpr int kMaxSegmentPoints = 64;

/// n-point Gauss-Legendre rule on [0,1], 1 <= n <= 64.
SegmentRule gauss_segment(int n_points);

/// Collapsed (Duffy) tensor Gauss rule exact for polynomials of total
/// degree <= degree.
TriangleRule gauss_triangle(int degree);

/// Points per segment for an integrand oscillating like e^{i omega s} along
/// a segment of the given length.
int oscillatory_points(double omega, double length);

/// Triangle rule degree for an integrand oscillating with frequency omega
/// over a triangle of diameter h.
int oscillatory_degree(double omega, double h);

using Triangle = std::array<int, 3>;

/// Ear-clipping triangulation of a simple polygon given counter-clockwise.
/// Returned triangles index into `polygon` and are counter-clockwise.
/// Throws MeshError for self-intersecting or degenerate input.
std::vector<Triangle> triangulate_polygon(std::span<const Vec2> polygon);

using ScalarField = std::function<cplx(const Vec2&)>;

/// Composite Gauss integral of f over the segment [a, b] with `n_points`
/// points, split into equal pieces whenever n_points exceeds the largest
/// tabulated rule.
cplx integrate_segment(const Vec2& a, const Vec2& b, const ScalarField& f, int n_points);

/// Integral over one triangle using a rule of the given degree.
cplx integrate_triangle(const Vec2& a, const Vec2& b, const Vec2& c, const ScalarField& f,
                        int degree);

/// Sub-triangulated Gauss integral of f over a simple polygon.
cplx integrate_polygon(std::span<const Vec2> polygon, const ScalarField& f, int target_degree);

/// Polygon integral whose per-triangle degree is chosen from the
/// integrand's oscillation frequency; large triangles are split until the
/// required rule fits in the tabulated range.
cplx integrate_polygon_oscillatory(std::span<const Vec2> polygon, const ScalarField& f,
                                   double omega);

/// Visit every quadrature point (x, weight) of the oscillatory polygon rule.
void for_each_polygon_point(std::span<const Vec2> polygon, double omega,
                            const std::function<void(const Vec2&, double)>& visit);

}  // namespace pwvem::quadrature
