#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pwvem/pwcore.hpp"
#include "pwvem/quadrature.hpp"

using namespace pwvem;
namespace q = pwvem::quadrature;

namespace {

double rel(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

// Gauss on [a, b] of w(t) exp(i k (d_m - d_l) . (x(t) - origin)), t in [0, 1] from a.
template <class W>
cplx edge_oracle(const Vec2& a, const Vec2& b, double k, const Vec2& dm, const Vec2& dl, const Vec2& o, W w) {
  const auto rule = q::gauss_segment(40);
  const double len = (b - a).norm();
  cplx s = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = rule.nodes[i];
    const Vec2 x = a + t * (b - a);
    s += rule.weights[i] * w(t) * expi(k * (dm - dl).dot(x - o));
  }
  return len * s;
}

cplx mass_oracle(const std::vector<Vec2>& poly, double k, const Vec2& dm, const Vec2& dl,
                 const Vec2& o = Vec2::Zero()) {
  return q::integrate_polygon(poly, [&](const Vec2& x) { return expi(k * (dm - dl).dot(x - o)); }, 40);
}

}  // namespace

TEST_CASE("equispaced directions") {
  const auto d3 = equispaced_directions(3);
  REQUIRE(d3.angles.size() == 3);
  CHECK(d3.angles[0] == 0.0);
  CHECK(d3.angles[1] == doctest::Approx(2 * kPi / 3));
  CHECK(d3.angles[2] == doctest::Approx(4 * kPi / 3));

  const auto d5 = equispaced_directions(5);
  CHECK(d5.delta == doctest::Approx(1.0));
  double min_angle = 10;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) min_angle = std::min(min_angle, std::acos(std::clamp(d5[i].dot(d5[j]), -1.0, 1.0)));
  CHECK(min_angle == doctest::Approx(2 * kPi / 5));

  const auto d13 = equispaced_directions(13, 0.4);
  for (int l = 0; l < 13; ++l) CHECK(std::abs(d13[l].norm() - 1.0) < 1e-15);
  CHECK(d13.angles[0] == 0.4);

  CHECK_THROWS_AS(equispaced_directions(4), InvalidArgument);
  CHECK_THROWS_AS(equispaced_directions(1), InvalidArgument);
}

TEST_CASE("wave context phases") {
  WaveContext ctx(20.0, equispaced_directions(7, 0.1));
  const Vec2 xK(0.3, 0.4), xj(0.1, 0.45), x(0.27, 0.33);
  for (int l = 0; l < 7; ++l) {
    const cplx c = ctx.phase(l, xj, xK);
    CHECK(std::abs(std::abs(c) - 1.0) < 1e-15);
    // pw_{jl}(x) = c_{jl} pw_l(x)
    CHECK(std::abs(ctx.plane_wave(l, x, xj) - c * ctx.plane_wave(l, x, xK)) < 1e-14);
  }
  CHECK(ctx.wavelength() == doctest::Approx(2 * kPi / 20));
}

TEST_CASE("basis index round trip") {
  for (int p : {3, 13}) {
    for (int r = 0; r < 6 * p; ++r) CHECK(BasisIndex::from_flat(r, p).flat(p) == r);
    const auto b = BasisIndex::from_flat(2 * p + 1, p);
    CHECK(b.vertex == 2);
    CHECK(b.direction == 1);
  }
}

TEST_CASE("edge integral special cases") {
  const Vec2 a(0.1, 0.2), b(0.4, 0.6);
  const double len = (b - a).norm();
  const Vec2 d(0.6, 0.8);
  CHECK(std::abs(edge_pw_integral(a, b, 30, d, d) - len) < 1e-15);

  // d_m - d_l perpendicular to b - a: constant integrand
  const Vec2 t = (b - a) / len;
  const Vec2 n(-t.y(), t.x());
  const double c = 0.3;
  const Vec2 dm = c * t + std::sqrt(1 - c * c) * n, dl = c * t - std::sqrt(1 - c * c) * n;
  const cplx v = edge_pw_integral(a, b, 17, dm, dl);
  CHECK(std::abs(v - len * expi(17 * (dm - dl).dot(a))) < 1e-14);

  CHECK(std::abs(edge_hat_pw_integral(EdgeWeight::Hat, a, b, 30, d, d) - len / 2) < 1e-15);
  CHECK(std::abs(edge_hat_pw_integral(EdgeWeight::HatSquared, a, b, 30, d, d) - len / 3) < 1e-15);
  CHECK(std::abs(edge_hat_pw_integral(EdgeWeight::HatProduct, a, b, 30, d, d) - len / 6) < 1e-15);
}

TEST_CASE("edge kernels against the mpmath oracle") {
  // a=(0.1,0.2) b=(0.4,0.25) origin=(0.2,0.1) k=20 p=13 m=0 l=3
  const auto dirs = equispaced_directions(13);
  const Vec2 a(0.1, 0.2), b(0.4, 0.25), o(0.2, 0.1);
  const double k = 20;
  const Vec2 &dm = dirs[0], &dl = dirs[3];
  CHECK(rel(edge_pw_integral(a, b, k, dm, dl, o), {-0.0037633212865401258237, -0.11938344700091086599}) < 1e-13);
  CHECK(rel(edge_hat_pw_integral(EdgeWeight::Hat, a, b, k, dm, dl, o),
            {-0.068113443103018755433, -0.057603900749162571916}) < 1e-13);
  CHECK(rel(edge_hat_pw_integral(EdgeWeight::HatSquared, a, b, k, dm, dl, o),
            {-0.067138752100152865753, -0.026683880154831657796}) < 1e-13);
  CHECK(rel(edge_hat_pw_integral(EdgeWeight::HatProduct, a, b, k, dm, dl, o),
            {-0.0009746910028658896802, -0.03092002059433091412}) < 1e-13);
  // the hat weight is attached to `a`: swapping the endpoints moves it
  const cplx from_b = edge_hat_pw_integral(EdgeWeight::Hat, b, a, k, dm, dl, o);
  CHECK(rel(from_b, edge_oracle(a, b, k, dm, dl, o, [](double t) { return t; })) < 1e-13);
}

TEST_CASE("edge kernels against 40-point Gauss") {
  SUBCASE("spec case k=20 on (0,0)-(0.25,0)") {
    const Vec2 a(0, 0), b(0.25, 0), dm(1, 0), dl(0, 1);
    const cplx v = edge_pw_integral(a, b, 20, dm, dl);
    CHECK(rel(v, edge_oracle(a, b, 20, dm, dl, Vec2::Zero(), [](double) { return 1.0; })) < 1e-13);
  }
  SUBCASE("Phi4 k=20 on (0,0)-(0.1,0.1)") {
    const Vec2 a(0, 0), b(0.1, 0.1), dm(1, 0), dl(-1, 0);
    const cplx v = edge_hat_pw_integral(EdgeWeight::HatProduct, a, b, 20, dm, dl);
    CHECK(rel(v, edge_oracle(a, b, 20, dm, dl, Vec2::Zero(), [](double t) { return (1 - t) * t; })) < 1e-13);
  }
  SUBCASE("all direction pairs, p=13") {
    const auto dirs = equispaced_directions(13, 0.2);
    const Vec2 a(0.3, 0.1), b(0.1, 0.35), o(0.2, 0.2);
    for (double k : {3.0, 20.0}) {
      for (int m = 0; m < 13; ++m) {
        for (int l = 0; l < 13; ++l) {
          auto check = [&](EdgeWeight w, auto weight) {
            const cplx got = edge_hat_pw_integral(w, a, b, k, dirs[m], dirs[l], o);
            const cplx want = edge_oracle(a, b, k, dirs[m], dirs[l], o, weight);
            CHECK(std::abs(got - want) <= 1e-12 * (b - a).norm());
          };
          check(EdgeWeight::Hat, [](double t) { return 1 - t; });
          check(EdgeWeight::HatSquared, [](double t) { return (1 - t) * (1 - t); });
          check(EdgeWeight::HatProduct, [](double t) { return (1 - t) * t; });
        }
      }
    }
  }
}

TEST_CASE("polygon mass integral") {
  const std::vector<Vec2> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const Vec2 dm(1, 0), dl(0, 1);
  CHECK(std::abs(polygon_pw_mass_integral(square, 20, dm, dm) - 1.0) < 1e-15);
  CHECK(rel(polygon_pw_mass_integral(square, 20, dm, dl), mass_oracle(square, 20, dm, dl)) < 1e-12);

  // k=20, p=13, m=0, l=5, origin (0.3, 0.3), mpmath
  const std::vector<Vec2> pent = {{0.1, 0.1}, {0.5, 0.15}, {0.6, 0.45}, {0.3, 0.6}, {0.05, 0.4}};
  const auto dirs = equispaced_directions(13);
  const cplx v = polygon_pw_mass_integral(pent, 20, dirs[0], dirs[5], Vec2(0.3, 0.3));
  CHECK(rel(v, {0.0061694836454357370422, 0.0072600981232552475984}) < 1e-13);

  // cyclic relabeling
  auto rolled = pent;
  for (int s = 1; s < 5; ++s) {
    std::rotate(rolled.begin(), rolled.begin() + 1, rolled.end());
    CHECK(std::abs(polygon_pw_mass_integral(rolled, 20, dirs[0], dirs[5], Vec2(0.3, 0.3)) - v) < 1e-14);
  }
}

TEST_CASE("polygon mass vs sub-triangulated quadrature, p=13, k h <= 6") {
  const auto dirs = equispaced_directions(13);
  const std::vector<Vec2> hex = {{0.0, 0.0}, {0.2, -0.05}, {0.32, 0.1}, {0.28, 0.26}, {0.1, 0.3}, {-0.05, 0.15}};
  const std::vector<Vec2> arrow = {{0, 0}, {0.15, 0.08}, {0.3, 0}, {0.3, 0.2}, {0.15, 0.28}, {0, 0.2}};
  for (const auto* poly : {&hex, &arrow}) {
    double h = 0;
    for (const auto& a : *poly)
      for (const auto& b : *poly) h = std::max(h, (a - b).norm());
    for (double k : {1.0, 6.0 / h}) {
      for (int m = 0; m < 13; ++m)
        for (int l = 0; l < 13; ++l) {
          const cplx got = polygon_pw_mass_integral(*poly, k, dirs[m], dirs[l]);
          const cplx want = mass_oracle(*poly, k, dirs[m], dirs[l]);
          CHECK(rel(got, want) < 1e-12);
        }
    }
  }
}

TEST_CASE("small direction difference uses the fallback consistently") {
  const std::vector<Vec2> tri = {{0.1, 0.1}, {0.4, 0.15}, {0.2, 0.45}};
  const double h = (tri[2] - tri[1]).norm();
  const double k = 10;
  const Vec2 dm(1, 0);
  // k |d_m - d_l| h straddles the threshold
  for (double f : {0.5, 0.99, 1.01, 2.0}) {
    const double ang = f * kMassFallbackThreshold / (k * h);
    const Vec2 dl(std::cos(ang), std::sin(ang));
    CHECK(rel(polygon_pw_mass_integral(tri, k, dm, dl), mass_oracle(tri, k, dm, dl)) < 1e-12);
  }
}

TEST_CASE("hermitian symmetry and translation covariance") {
  const auto dirs = equispaced_directions(9, 0.3);
  const std::vector<Vec2> pent = {{0.1, 0.1}, {0.5, 0.15}, {0.6, 0.45}, {0.3, 0.6}, {0.05, 0.4}};
  const Vec2 shift(0.37, -0.21);
  std::vector<Vec2> moved;
  for (const auto& v : pent) moved.push_back(v + shift);
  const double k = 15;
  for (int m = 0; m < 9; ++m)
    for (int l = 0; l < 9; ++l) {
      const cplx ml = polygon_pw_mass_integral(pent, k, dirs[m], dirs[l]);
      const cplx lm = polygon_pw_mass_integral(pent, k, dirs[l], dirs[m]);
      CHECK(std::abs(ml - std::conj(lm)) < 1e-14);
      const cplx e = edge_hat_pw_integral(EdgeWeight::HatSquared, pent[0], pent[1], k, dirs[m], dirs[l]);
      const cplx f = edge_hat_pw_integral(EdgeWeight::HatSquared, pent[0], pent[1], k, dirs[l], dirs[m]);
      CHECK(std::abs(e - std::conj(f)) < 1e-14);

      const cplx t = polygon_pw_mass_integral(moved, k, dirs[m], dirs[l]);
      CHECK(std::abs(t - expi(k * (dirs[m] - dirs[l]).dot(shift)) * ml) < 1e-13);
    }
}
