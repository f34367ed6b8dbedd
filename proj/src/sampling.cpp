#include "normlab/sampling.hpp"

#include <algorithm>
#include <array>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "normlab/errors.hpp"

namespace normlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGoldenFrac = 0.6180339887498948482;  // 1/phi
constexpr double kSqrt2Frac = 0.4142135623730950488;   // sqrt(2) - 1

double frac(double x) { return x - std::floor(x); }

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

constexpr std::array<std::uint64_t, 24> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19,
                                                   23, 29, 31, 37, 41, 43, 47, 53,
                                                   59, 61, 67, 71, 73, 79, 83, 89};

}  // namespace

std::vector<CPoint> sphere_directions(std::size_t dimension, std::size_t count,
                                      std::uint64_t seed) {
  if (dimension == 0) throw ArgumentError("sphere_directions: dimension must be positive");
  if (2 * dimension > kPrimes.size()) {
    throw ArgumentError("sphere_directions: dimension too large for the Halton generator");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<CPoint> out;
  out.reserve(count);
  if (dimension == 1) {
    const double shift = unit(rng);
    for (std::size_t k = 0; k < count; ++k) {
      const double t = kTwoPi * frac(shift + static_cast<double>(k) / static_cast<double>(count));
      out.push_back(CPoint{std::polar(1.0, t)});
    }
    return out;
  }
  if (dimension == 2) {
    const double s_base = unit(rng);
    const double s_phase = unit(rng);
    for (std::size_t k = 0; k < count; ++k) {
      const double kd = static_cast<double>(k);
      const double t = (kd + 0.5) / static_cast<double>(count);  // |v_2|^2, uniform on [0,1]
      const double beta = kTwoPi * frac(s_base + kd * kGoldenFrac);
      const double gamma = kTwoPi * frac(s_phase + kd * kSqrt2Frac);
      out.push_back(CPoint{std::polar(std::sqrt(1.0 - t), gamma),
                           std::polar(std::sqrt(t), gamma + beta)});
    }
    return out;
  }
  std::vector<double> shift(2 * dimension);
  for (auto& s : shift) s = unit(rng);
  for (std::size_t k = 0; k < count; ++k) {
    CPoint v(dimension);
    for (std::size_t c = 0; c < dimension; ++c) {
      std::array<double, 2> g{};
      for (std::size_t part = 0; part < 2; ++part) {
        const std::size_t axis = 2 * c + part;
        double u = frac(radical_inverse(k + 1, kPrimes[axis]) + shift[axis]);
        u = std::clamp(u, 1e-12, 1.0 - 1e-12);
        g[part] = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * u - 1.0);
      }
      v[c] = Complex(g[0], g[1]);
    }
    const double nrm = v.norm();
    if (nrm == 0.0) {
      v = CPoint::basis(dimension, 0);
    } else {
      v *= 1.0 / nrm;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<CPoint> ball_grid(std::size_t dimension, double radius, std::size_t shells,
                              std::uint64_t seed) {
  if (!(radius > 0.0)) throw ArgumentError("ball_grid: radius must be positive");
  if (shells == 0) throw ArgumentError("ball_grid: need at least one shell");
  const std::size_t per_shell = 4 * shells * dimension;
  std::vector<CPoint> grid;
  grid.reserve(1 + shells * per_shell);
  grid.emplace_back(dimension);
  for (std::size_t s = 1; s <= shells; ++s) {
    const double r = radius * static_cast<double>(s) / static_cast<double>(shells);
    for (const auto& u : sphere_directions(dimension, per_shell, seed + s)) {
      grid.push_back(r * u);
    }
  }
  return grid;
}

}  // namespace normlab
