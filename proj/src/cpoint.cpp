#include "normlab/cpoint.hpp"

#include <cmath>
#include <string>

#include "normlab/errors.hpp"

namespace normlab {

double CPoint::norm_squared() const {
  double s = 0.0;
  for (const auto& c : coords_) s += std::norm(c);
  return s;
}

double CPoint::norm() const {
  return std::sqrt(norm_squared());
}

CPoint& CPoint::operator+=(const CPoint& other) {
  require_same_dimension(*this, other, "addition");
  for (std::size_t k = 0; k < coords_.size(); ++k) coords_[k] += other.coords_[k];
  return *this;
}

CPoint& CPoint::operator-=(const CPoint& other) {
  require_same_dimension(*this, other, "subtraction");
  for (std::size_t k = 0; k < coords_.size(); ++k) coords_[k] -= other.coords_[k];
  return *this;
}

CPoint& CPoint::operator*=(Complex s) {
  for (auto& c : coords_) c *= s;
  return *this;
}

CPoint CPoint::basis(std::size_t dimension, std::size_t k) {
  CPoint e(dimension);
  e[k] = 1.0;
  return e;
}

Complex hermitian(const CPoint& a, const CPoint& b) {
  require_same_dimension(a, b, "hermitian pairing");
  Complex s = 0.0;
  for (std::size_t k = 0; k < a.dimension(); ++k) s += a[k] * std::conj(b[k]);
  return s;
}

Complex bilinear(std::span<const Complex> a, const CPoint& b) {
  if (a.size() != b.dimension()) {
    throw DomainError("bilinear pairing: dimension mismatch (" + std::to_string(a.size()) +
                      " vs " + std::to_string(b.dimension()) + ")");
  }
  Complex s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void require_same_dimension(const CPoint& a, const CPoint& b, const char* what) {
  if (a.dimension() != b.dimension()) {
    throw DomainError(std::string(what) + ": dimension mismatch (" +
                      std::to_string(a.dimension()) + " vs " + std::to_string(b.dimension()) +
                      ")");
  }
}

}  // namespace normlab
