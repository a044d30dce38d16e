#include <cmath>
#include <sstream>

#include "pwvem/postproc.hpp"
#include "pwvem/specialfn.hpp"

namespace pwvem {

ExactSolution ExactSolution::hankel(double k, const Vec2& source) {
  if (!(k > 0.0)) throw InvalidArgument("wave number must be positive");
  ExactSolution s;
  s.kind_ = ExactKind::Hankel;
  s.k_ = k;
  s.center_ = source;
  return s;
}

ExactSolution ExactSolution::bessel_singular(double k, double xi, const Vec2& origin) {
  if (!(k > 0.0)) throw InvalidArgument("wave number must be positive");
  if (!(xi > 0.0 && xi <= specialfn::kMaxOrder)) {
    std::ostringstream os;
    os << "singular-solution order must lie in (0, " << specialfn::kMaxOrder << "], got "
       << xi;
    throw InvalidArgument(os.str());
  }
  ExactSolution s;
  s.kind_ = ExactKind::BesselSingular;
  s.k_ = k;
  s.order_ = xi;
  s.center_ = origin;
  return s;
}

ExactSolution ExactSolution::plane_waves(double k, std::vector<Vec2> directions,
                                         std::vector<cplx> amplitudes, const Vec2& anchor) {
  if (!(k > 0.0)) throw InvalidArgument("wave number must be positive");
  if (directions.empty() || directions.size() != amplitudes.size())
    throw InvalidArgument("plane-wave sum needs matching, non-empty direction/amplitude lists");
  ExactSolution s;
  s.kind_ = ExactKind::PlaneWaveSum;
  s.k_ = k;
  s.center_ = anchor;
  s.directions_ = std::move(directions);
  s.amplitudes_ = std::move(amplitudes);
  return s;
}

cplx ExactSolution::value(const Vec2& x) const {
  switch (kind_) {
    case ExactKind::Hankel:
      return specialfn::hankel1(0.0, k_ * (x - center_).norm());
    case ExactKind::BesselSingular: {
      const Vec2 v = x - center_;
      const double r = v.norm();
      if (r == 0.0) return 0.0;
      const double theta = std::atan2(v.y(), v.x());
      return specialfn::bessel_j(order_, k_ * r) * std::cos(order_ * theta);
    }
    case ExactKind::PlaneWaveSum: {
      cplx u = 0.0;
      for (std::size_t l = 0; l < directions_.size(); ++l)
        u += amplitudes_[l] * expi(k_ * directions_[l].dot(x - center_));
      return u;
    }
  }
  return 0.0;
}

CVec2 ExactSolution::gradient(const Vec2& x) const {
  switch (kind_) {
    case ExactKind::Hankel: {
      const Vec2 v = x - center_;
      const double r = v.norm();
      if (r == 0.0) throw DomainError("Hankel solution evaluated at its source point");
      const cplx dr = k_ * specialfn::hankel1_prime(0.0, k_ * r);
      return CVec2(dr * v.x() / r, dr * v.y() / r);
    }
    case ExactKind::BesselSingular: {
      const Vec2 v = x - center_;
      const double r = v.norm();
      if (r == 0.0) return CVec2::Zero();
      const double theta = std::atan2(v.y(), v.x());
      const double c = std::cos(order_ * theta), s = std::sin(order_ * theta);
      const double ur = k_ * specialfn::bessel_j_prime(order_, k_ * r) * c;
      const double ut = -order_ * specialfn::bessel_j(order_, k_ * r) * s / r;  // (1/r) du/dtheta
      const double ct = v.x() / r, st = v.y() / r;
      return CVec2(ur * ct - ut * st, ur * st + ut * ct);
    }
    case ExactKind::PlaneWaveSum: {
      CVec2 g = CVec2::Zero();
      for (std::size_t l = 0; l < directions_.size(); ++l) {
        const cplx w = I * k_ * amplitudes_[l] * expi(k_ * directions_[l].dot(x - center_));
        g += w * directions_[l].cast<cplx>();
      }
      return g;
    }
  }
  return CVec2::Zero();
}

std::string ExactSolution::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case ExactKind::Hankel:
      os << "hankel(" << center_.x() << ";" << center_.y() << ")";
      break;
    case ExactKind::BesselSingular:
      os << "bessel(xi=" << order_ << ")";
      break;
    case ExactKind::PlaneWaveSum:
      os << "planewaves(" << directions_.size() << ")";
      break;
  }
  return os.str();
}

BoundaryDatum impedance_datum(const ExactSolution& exact, double k) {
  if (exact.kind() == ExactKind::Hankel) {
    const Vec2& s = exact.center();
    if (s.x() >= 0.0 && s.x() <= 1.0 && s.y() >= 0.0 && s.y() <= 1.0) {
      std::ostringstream os;
      os << "Hankel source (" << s.x() << ", " << s.y() << ") lies in the closed domain";
      throw InvalidArgument(os.str());
    }
  }
  return [exact, k](const Vec2& x, const Vec2& normal) -> cplx {
    const CVec2 g = exact.gradient(x);
    return g(0) * normal.x() + g(1) * normal.y() + I * k * exact.value(x);
  };
}

}  // namespace pwvem
