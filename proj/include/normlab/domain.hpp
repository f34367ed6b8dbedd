#pragma once

#include <variant>
#include <vector>

#include "normlab/cpoint.hpp"

namespace normlab {

/// Open Euclidean ball B(a, r) in C^n.
class Ball {
 public:
  Ball(CPoint center, double radius);

  const CPoint& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  std::size_t dimension() const noexcept { return center_.dimension(); }

 private:
  CPoint center_;
  double radius_;
};

/// Open polydisc: product of coordinate discs |z_k - a_k| < r_k.
class Polydisc {
 public:
  Polydisc(CPoint center, std::vector<double> radii);

  const CPoint& center() const noexcept { return center_; }
  const std::vector<double>& radii() const noexcept { return radii_; }
  std::size_t dimension() const noexcept { return center_.dimension(); }

 private:
  CPoint center_;
  std::vector<double> radii_;
};

/// A bounded domain with exact boundary distance.
class Domain {
 public:
  Domain(Ball b) : shape_(std::move(b)) {}          // NOLINT(google-explicit-constructor)
  Domain(Polydisc p) : shape_(std::move(p)) {}      // NOLINT(google-explicit-constructor)

  const std::variant<Ball, Polydisc>& shape() const noexcept { return shape_; }
  const CPoint& center() const noexcept;
  std::size_t dimension() const noexcept { return center().dimension(); }

 private:
  std::variant<Ball, Polydisc> shape_;
};

/// Strict interior membership. Throws DomainError on dimension mismatch.
bool contains(const Domain& domain, const CPoint& p);
bool contains(const Ball& ball, const CPoint& p);

/// Ball: r - |p - a|. Polydisc: min_k (r_k - |p_k - a_k|), the radius of the
/// largest Euclidean ball about p inside the polydisc.
/// Throws DomainError if p is not interior.
double boundary_distance(const Domain& domain, const CPoint& p);

/// B(p, boundary_distance(p)), contained in the domain.
Ball inscribed_ball(const Domain& domain, const CPoint& p);

/// Smallest ball about the domain's center that contains it.
Ball circumscribed_ball(const Domain& domain);

}  // namespace normlab
