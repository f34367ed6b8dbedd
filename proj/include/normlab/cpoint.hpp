#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace normlab {

using Complex = std::complex<double>;

/// A point (or tangent vector) of C^n.
class CPoint {
 public:
  CPoint() = default;
  explicit CPoint(std::size_t dimension) : coords_(dimension) {}
  explicit CPoint(std::vector<Complex> coords) : coords_(std::move(coords)) {}
  CPoint(std::initializer_list<Complex> coords) : coords_(coords) {}

  std::size_t dimension() const noexcept { return coords_.size(); }

  Complex& operator[](std::size_t k) { return coords_[k]; }
  const Complex& operator[](std::size_t k) const { return coords_[k]; }

  std::span<const Complex> coords() const noexcept { return coords_; }
  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }

  /// Euclidean norm in C^n = R^{2n}.
  double norm() const;
  double norm_squared() const;

  CPoint& operator+=(const CPoint& other);
  CPoint& operator-=(const CPoint& other);
  CPoint& operator*=(Complex s);

  friend CPoint operator+(CPoint a, const CPoint& b) { return a += b; }
  friend CPoint operator-(CPoint a, const CPoint& b) { return a -= b; }
  friend CPoint operator*(Complex s, CPoint a) { return a *= s; }
  friend CPoint operator*(CPoint a, Complex s) { return a *= s; }

  friend bool operator==(const CPoint&, const CPoint&) = default;

  /// Unit vector along coordinate k (0-based).
  static CPoint basis(std::size_t dimension, std::size_t k);

 private:
  std::vector<Complex> coords_;
};

/// Hermitian pairing sum_k a_k * conj(b_k).
Complex hermitian(const CPoint& a, const CPoint& b);

/// Bilinear pairing sum_k a_k * b_k (gradient applied to a direction).
Complex bilinear(std::span<const Complex> a, const CPoint& b);

void require_same_dimension(const CPoint& a, const CPoint& b, const char* what);

}  // namespace normlab
