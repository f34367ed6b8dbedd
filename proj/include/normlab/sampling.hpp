#pragma once

#include <cstdint>
#include <vector>

#include "normlab/cpoint.hpp"

namespace normlab {

/// Deterministic low-discrepancy unit vectors in C^n (the sphere S^{2n-1}).
///   n = 1: equispaced phases with a seeded rotation.
///   n = 2: Fibonacci lattice on the base of the Hopf fibration, phases from
///          a Kronecker sequence.
///   n > 2: scrambled Halton points pushed through the normal quantile and
///          normalized.
std::vector<CPoint> sphere_directions(std::size_t dimension, std::size_t count,
                                      std::uint64_t seed);

/// Covering of the closed ball |zeta| <= radius: the origin followed by
/// `shells` concentric spheres of radius radius*s/shells, each carrying
/// 4*shells*dimension directions from sphere_directions. The outermost shell
/// lies exactly on |zeta| = radius.
std::vector<CPoint> ball_grid(std::size_t dimension, double radius, std::size_t shells,
                              std::uint64_t seed);

}  // namespace normlab
