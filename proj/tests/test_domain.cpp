#include <doctest.h>

#include <cmath>
#include <random>

#include "normlab/domain.hpp"
#include "normlab/errors.hpp"
#include "test_support.hpp"

using namespace normlab;
using normlab::testing::random_point;
using normlab::testing::random_unit;

namespace {

// Uniform-ish sample of the given ball.
CPoint sample_in(std::mt19937_64& rng, const Ball& b) {
  return b.center() + random_point(rng, b.dimension(), b.radius() * (1.0 - 1e-12));
}

// Sample of a polydisc: each coordinate uniform in its disc.
CPoint sample_in(std::mt19937_64& rng, const Polydisc& d) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CPoint p(d.dimension());
  for (std::size_t k = 0; k < p.dimension(); ++k) {
    const double r = d.radii()[k] * std::sqrt(unit(rng)) * (1.0 - 1e-12);
    p[k] = d.center()[k] + std::polar(r, 2.0 * M_PI * unit(rng));
  }
  return p;
}

}  // namespace

TEST_CASE("contains: examples") {
  const Domain ball = Ball(CPoint{0.0, 0.0}, 1.0);
  CHECK(contains(ball, CPoint{0.0, 0.0}));
  CHECK_FALSE(contains(ball, CPoint{1.0, 0.0}));
  CHECK_FALSE(contains(ball, CPoint{Complex(0.0, 0.6), Complex(0.8, 0.0)}));
  const Domain poly = Polydisc(CPoint{0.0, 0.0}, {1.0, 2.0});
  CHECK(contains(poly, CPoint{0.5, 1.5}));
  CHECK_FALSE(contains(poly, CPoint{0.5, 2.0}));
  CHECK_THROWS_AS(contains(ball, CPoint{0.0}), DomainError);
}

TEST_CASE("constructors reject degenerate shapes") {
  CHECK_THROWS_AS(Ball(CPoint{0.0}, 0.0), ArgumentError);
  CHECK_THROWS_AS(Ball(CPoint{0.0}, -1.0), ArgumentError);
  CHECK_THROWS_AS(Polydisc(CPoint{0.0, 0.0}, {1.0, 0.0}), ArgumentError);
  CHECK_THROWS_AS(Polydisc(CPoint{0.0, 0.0}, {1.0}), ArgumentError);
}

TEST_CASE("boundary_distance: examples") {
  CHECK(boundary_distance(Ball(CPoint{0.0, 0.0}, 1.0), CPoint{0.0, 0.0}) == 1.0);
  CHECK(boundary_distance(Ball(CPoint{0.0}, 1.0), CPoint{0.5}) == 0.5);
  CHECK(boundary_distance(Polydisc(CPoint{0.0, 0.0}, {1.0, 2.0}), CPoint{0.5, 0.0}) == 0.5);
  CHECK(boundary_distance(Polydisc(CPoint{0.0, 0.0}, {1.0, 2.0}), CPoint{0.0, 1.8}) ==
        doctest::Approx(0.2));
  CHECK_THROWS_AS(boundary_distance(Ball(CPoint{0.0}, 1.0), CPoint{1.5}), DomainError);
  CHECK_THROWS_AS(inscribed_ball(Ball(CPoint{0.0}, 1.0), CPoint{1.0}), DomainError);
}

TEST_CASE("inscribed and circumscribed balls: examples") {
  const Ball i0 = inscribed_ball(Ball(CPoint{0.0, 0.0}, 1.0), CPoint{0.0, 0.0});
  CHECK(i0.radius() == 1.0);
  CHECK(i0.center() == CPoint{0.0, 0.0});
  const Ball i1 = inscribed_ball(Ball(CPoint{0.0}, 1.0), CPoint{0.5});
  CHECK(i1.center() == CPoint{0.5});
  CHECK(i1.radius() == 0.5);

  const Ball c0 = circumscribed_ball(Ball(CPoint{0.0}, 1.0));
  CHECK(c0.radius() == 1.0);
  const Ball c1 = circumscribed_ball(Polydisc(CPoint{Complex(1.0, 1.0), 0.0}, {1.0, 1.0}));
  CHECK(c1.radius() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(c1.center() == CPoint{Complex(1.0, 1.0), 0.0});
}

TEST_CASE("property: inscribed ball inside domain inside circumscribed ball") {
  std::mt19937_64 rng(2024);
  const std::vector<Domain> domains = {
      Ball(CPoint{0.0}, 1.0),
      Ball(CPoint{Complex(0.3, -0.2), Complex(1.0, 0.5)}, 0.7),
      Polydisc(CPoint{0.0, 0.0}, {1.0, 2.0}),
      Polydisc(CPoint{Complex(0.5, 0.0), 0.0, Complex(0.0, -1.0)}, {0.3, 1.0, 0.6}),
  };
  for (const auto& d : domains) {
    const Ball outer = circumscribed_ball(d);
    for (int t = 0; t < 20; ++t) {
      const CPoint p = std::visit([&](const auto& s) { return sample_in(rng, s); }, d.shape());
      REQUIRE(contains(d, p));
      const Ball inner = inscribed_ball(d, p);
      int violations = 0;
      for (int s = 0; s < 1000; ++s) {
        if (!contains(d, sample_in(rng, inner))) ++violations;
      }
      CHECK(violations == 0);
    }
    int outside = 0;
    for (int s = 0; s < 1000; ++s) {
      const CPoint q = std::visit([&](const auto& sh) { return sample_in(rng, sh); }, d.shape());
      if (!contains(outer, q)) ++outside;
    }
    CHECK(outside == 0);
  }
}

TEST_CASE("property: boundary distance is 1-Lipschitz and vanishes at the boundary") {
  std::mt19937_64 rng(7);
  const std::vector<Domain> domains = {Ball(CPoint{0.0, 0.0}, 1.0),
                                       Polydisc(CPoint{0.0, 0.0}, {1.0, 2.0})};
  for (const auto& d : domains) {
    for (int t = 0; t < 200; ++t) {
      const CPoint p = std::visit([&](const auto& s) { return sample_in(rng, s); }, d.shape());
      const CPoint q = std::visit([&](const auto& s) { return sample_in(rng, s); }, d.shape());
      // Sample along the segment; both shapes are convex.
      CPoint prev = p;
      for (int k = 1; k <= 10; ++k) {
        const CPoint cur = p + (static_cast<double>(k) / 10.0) * (q - p);
        const double diff =
            std::abs(boundary_distance(d, cur) - boundary_distance(d, prev));
        CHECK(diff <= (cur - prev).norm() + 1e-14);
        prev = cur;
      }
    }
  }
  // Approach sampled boundary points of the unit ball radially.
  const Domain ball = Ball(CPoint{0.0, 0.0}, 1.0);
  for (int t = 0; t < 50; ++t) {
    const CPoint b = random_unit(rng, 2);
    double last = 1.0;
    for (double eps = 0.5; eps > 1e-9; eps /= 10.0) {
      const double dist = boundary_distance(ball, (1.0 - eps) * b);
      CHECK(dist < last);
      CHECK(dist == doctest::Approx(eps).epsilon(1e-6));
      last = dist;
    }
  }
}
