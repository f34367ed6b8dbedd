#include "normlab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "normlab/errors.hpp"

namespace normlab {

Ball::Ball(CPoint center, double radius) : center_(std::move(center)), radius_(radius) {
  if (center_.dimension() == 0) throw ArgumentError("ball center has dimension 0");
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw ArgumentError("ball radius must be positive and finite, got " +
                        std::to_string(radius_));
  }
}

Polydisc::Polydisc(CPoint center, std::vector<double> radii)
    : center_(std::move(center)), radii_(std::move(radii)) {
  if (center_.dimension() == 0) throw ArgumentError("polydisc center has dimension 0");
  if (radii_.size() != center_.dimension()) {
    throw ArgumentError("polydisc needs one radius per coordinate");
  }
  for (double r : radii_) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw ArgumentError("polydisc radii must be positive and finite");
    }
  }
}

const CPoint& Domain::center() const noexcept {
  return std::visit([](const auto& s) -> const CPoint& { return s.center(); }, shape_);
}

namespace {

// Signed distance to the boundary; positive inside.
double signed_margin(const Ball& b, const CPoint& p) {
  require_same_dimension(b.center(), p, "ball query");
  return b.radius() - (p - b.center()).norm();
}

double signed_margin(const Polydisc& d, const CPoint& p) {
  require_same_dimension(d.center(), p, "polydisc query");
  double m = d.radii()[0] - std::abs(p[0] - d.center()[0]);
  for (std::size_t k = 1; k < p.dimension(); ++k) {
    m = std::min(m, d.radii()[k] - std::abs(p[k] - d.center()[k]));
  }
  return m;
}

double signed_margin(const Domain& domain, const CPoint& p) {
  return std::visit([&](const auto& s) { return signed_margin(s, p); }, domain.shape());
}

}  // namespace

bool contains(const Ball& ball, const CPoint& p) { return signed_margin(ball, p) > 0.0; }

bool contains(const Domain& domain, const CPoint& p) { return signed_margin(domain, p) > 0.0; }

double boundary_distance(const Domain& domain, const CPoint& p) {
  const double m = signed_margin(domain, p);
  if (!(m > 0.0)) throw DomainError("point is not interior to the domain");
  return m;
}

Ball inscribed_ball(const Domain& domain, const CPoint& p) {
  return Ball(p, boundary_distance(domain, p));
}

Ball circumscribed_ball(const Domain& domain) {
  return std::visit(
      [](const auto& s) -> Ball {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Ball>) {
          return s;
        } else {
          double sq = 0.0;
          for (double r : s.radii()) sq += r * r;
          return Ball(s.center(), std::sqrt(sq));
        }
      },
      domain.shape());
}

}  // namespace normlab
