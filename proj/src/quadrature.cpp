#include "pwvem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

namespace pwvem::quadrature {

namespace {

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
SegmentRule compute_gauss(int n) {
  SegmentRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.order = 2 * n - 1;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map to [0, 1]; nodes ascending
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  if (n == 1) {
    rule.nodes[0] = 0.5;
    rule.weights[0] = 1.0;
  }
  return rule;
}

const SegmentRule& cached_gauss(int n) {
  static std::once_flag once;
  static std::vector<SegmentRule> table;
  std::call_once(once, [] {
    table.reserve(kMaxSegmentPoints + 1);
    table.emplace_back();
    for (int i = 1; i <= kMaxSegmentPoints; ++i) table.push_back(compute_gauss(i));
  });
  return table[n];
}

int triangle_points_per_direction(int degree) { return (std::max(degree, 0) + 3) / 2; }

constexpr int kMaxTriangleDegree = 2 * kMaxSegmentPoints - 2;

double diameter3(const Vec2& a, const Vec2& b, const Vec2& c) {
  return std::max({(a - b).norm(), (b - c).norm(), (c - a).norm()});
}

// Orientation of (a, b, c) with a tolerance scaled to the segment lengths.
int orient(const Vec2& a, const Vec2& b, const Vec2& c, double scale) {
  const double v = cross(b - a, c - a);
  const double tol = 1e-12 * scale * scale;
  if (v > tol) return 1;
  if (v < -tol) return -1;
  return 0;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool segments_touch(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double scale) {
  const int o1 = orient(a, b, c, scale), o2 = orient(a, b, d, scale);
  const int o3 = orient(c, d, a, scale), o4 = orient(c, d, b, scale);
  if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return o1 * o2 < 0 && o3 * o4 < 0;
}

void check_simple(std::span<const Vec2> poly, double scale) {
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_touch(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n], scale)) {
        throw MeshError("polygon is self-intersecting (edges " + std::to_string(i) + " and " +
                        std::to_string(j) + ")");
      }
    }
  }
}

void visit_triangle(const Vec2& a, const Vec2& b, const Vec2& c, double omega,
                    const std::function<void(const Vec2&, double)>& visit) {
  const double h = diameter3(a, b, c);
  const int degree = oscillatory_degree(omega, h);
  if (degree > kMaxTriangleDegree) {
    const Vec2 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
    visit_triangle(a, ab, ca, omega, visit);
    visit_triangle(ab, b, bc, omega, visit);
    visit_triangle(ca, bc, c, omega, visit);
    visit_triangle(ab, bc, ca, omega, visit);
    return;
  }
  const TriangleRule rule = gauss_triangle(degree);
  const double jac = std::abs(cross(b - a, c - a));
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const Vec2 x = a + rule.nodes[q].x() * (b - a) + rule.nodes[q].y() * (c - a);
    visit(x, rule.weights[q] * jac);
  }
}

}  // namespace

SegmentRule gauss_segment(int n_points) {
  if (n_points < 1 || n_points > kMaxSegmentPoints) {
    throw InvalidArgument("gauss_segment: n_points must be in [1, 64], got " +
                          std::to_string(n_points));
  }
  return cached_gauss(n_points);
}

TriangleRule gauss_triangle(int degree) {
  const int n = triangle_points_per_direction(degree);
  if (n > kMaxSegmentPoints) {
    throw InvalidArgument("gauss_triangle: degree " + std::to_string(degree) + " too high");
  }
  const SegmentRule& g = cached_gauss(n);
  TriangleRule rule;
  rule.order = 2 * n - 2;
  rule.nodes.reserve(n * n);
  rule.weights.reserve(n * n);
  // (s, t) in [0,1]^2 -> (s (1 - t), s t), Jacobian s.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double s = g.nodes[i], t = g.nodes[j];
      rule.nodes.emplace_back(s * (1.0 - t), s * t);
      rule.weights.push_back(g.weights[i] * g.weights[j] * s);
    }
  }
  return rule;
}

int oscillatory_points(double omega, double length) {
  return std::max(4, static_cast<int>(std::ceil(std::abs(omega) * length / 2.0)) + 6);
}

int oscillatory_degree(double omega, double h) {
  return 2 * static_cast<int>(std::ceil(std::abs(omega) * h / 2.0)) + 12;
}

std::vector<Triangle> triangulate_polygon(std::span<const Vec2> polygon) {
  const int n = static_cast<int>(polygon.size());
  if (n < 3) throw MeshError("polygon needs at least 3 vertices");
  if (n == 3) return {{0, 1, 2}};

  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, (polygon[i] - polygon[0]).norm());
  check_simple(polygon, scale);

  std::vector<int> ring(n);
  for (int i = 0; i < n; ++i) ring[i] = i;
  std::vector<Triangle> out;
  out.reserve(n - 2);

  auto is_ear = [&](int pos, bool allow_flat) {
    const int m = static_cast<int>(ring.size());
    const int ia = ring[(pos + m - 1) % m], ib = ring[pos], ic = ring[(pos + 1) % m];
    const Vec2 &a = polygon[ia], &b = polygon[ib], &c = polygon[ic];
    const int o = orient(a, b, c, scale);
    if (o < 0) return false;
    if (o == 0) return allow_flat;
    for (int q = 0; q < m; ++q) {
      const int iv = ring[q];
      if (iv == ia || iv == ib || iv == ic) continue;
      const Vec2& v = polygon[iv];
      if (orient(a, b, v, scale) >= 0 && orient(b, c, v, scale) >= 0 &&
          orient(c, a, v, scale) >= 0) {
        return false;
      }
    }
    return true;
  };

  while (ring.size() > 3) {
    const int m = static_cast<int>(ring.size());
    int found = -1;
    bool flat = false;
    for (int pos = 0; pos < m && found < 0; ++pos) {
      if (is_ear(pos, false)) found = pos;
    }
    if (found < 0) {
      for (int pos = 0; pos < m && found < 0; ++pos) {
        if (is_ear(pos, true)) {
          found = pos;
          flat = true;
        }
      }
    }
    if (found < 0) throw MeshError("ear clipping failed: polygon is not simple or not CCW");
    if (!flat) {
      out.push_back({ring[(found + m - 1) % m], ring[found], ring[(found + 1) % m]});
    }
    ring.erase(ring.begin() + found);
  }
  if (orient(polygon[ring[0]], polygon[ring[1]], polygon[ring[2]], scale) > 0) {
    out.push_back({ring[0], ring[1], ring[2]});
  }
  return out;
}

cplx integrate_segment(const Vec2& a, const Vec2& b, const ScalarField& f, int n_points) {
  if (n_points < 1) throw InvalidArgument("integrate_segment: n_points must be >= 1");
  const int pieces = (n_points + kMaxSegmentPoints - 1) / kMaxSegmentPoints;
  const int per_piece = (n_points + pieces - 1) / pieces;
  const SegmentRule& g = cached_gauss(per_piece);
  const double len = (b - a).norm() / pieces;
  cplx sum = 0.0;
  for (int piece = 0; piece < pieces; ++piece) {
    for (int q = 0; q < per_piece; ++q) {
      const double t = (piece + g.nodes[q]) / pieces;
      sum += g.weights[q] * f(a + t * (b - a));
    }
  }
  return sum * len;
}

cplx integrate_triangle(const Vec2& a, const Vec2& b, const Vec2& c, const ScalarField& f,
                        int degree) {
  const TriangleRule rule = gauss_triangle(degree);
  const double jac = std::abs(cross(b - a, c - a));
  cplx sum = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const Vec2 x = a + rule.nodes[q].x() * (b - a) + rule.nodes[q].y() * (c - a);
    sum += rule.weights[q] * f(x);
  }
  return sum * jac;
}

cplx integrate_polygon(std::span<const Vec2> polygon, const ScalarField& f, int target_degree) {
  cplx sum = 0.0;
  for (const auto& t : triangulate_polygon(polygon)) {
    sum += integrate_triangle(polygon[t[0]], polygon[t[1]], polygon[t[2]], f, target_degree);
  }
  return sum;
}

void for_each_polygon_point(std::span<const Vec2> polygon, double omega,
                            const std::function<void(const Vec2&, double)>& visit) {
  for (const auto& t : triangulate_polygon(polygon)) {
    visit_triangle(polygon[t[0]], polygon[t[1]], polygon[t[2]], omega, visit);
  }
}

cplx integrate_polygon_oscillatory(std::span<const Vec2> polygon, const ScalarField& f,
                                   double omega) {
  cplx sum = 0.0;
  for_each_polygon_point(polygon, omega, [&](const Vec2& x, double w) { sum += w * f(x); });
  return sum;
}

}  // namespace pwvem::quadrature
