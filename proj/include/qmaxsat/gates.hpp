#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace qmaxsat {

using Complex = std::complex<double>;

struct Mat2 {
  Complex a00, a01, a10, a11;

  Mat2 operator*(const Mat2& o) const {
    return {a00 * o.a00 + a01 * o.a10, a00 * o.a01 + a01 * o.a11,
            a10 * o.a00 + a11 * o.a10, a10 * o.a01 + a11 * o.a11};
  }

  Mat2 adjoint() const {
    return {std::conj(a00), std::conj(a10), std::conj(a01), std::conj(a11)};
  }

  double max_abs_diff(const Mat2& o) const {
    double d = std::abs(a00 - o.a00);
    d = std::max(d, std::abs(a01 - o.a01));
    d = std::max(d, std::abs(a10 - o.a10));
    d = std::max(d, std::abs(a11 - o.a11));
    return d;
  }

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
};

// Partial negation: the root_order-th root of the NOT gate. Applying the
// d-th power rotates a qubit by a d/root_order fraction of a full negation,
// giving measurement probability sin^2(d*pi/(2*root_order)) for |1>.
class PartialNegation {
 public:
  explicit PartialNegation(int root_order) : root_order_(root_order) {
    if (root_order < 1) throw std::invalid_argument("root order must be >= 1");
  }

  int root_order() const { return root_order_; }

  // Principal branch of (-1)^(1/root_order); t^root_order = -1.
  Complex t() const { return unit_phase(1); }

  Complex unit_phase(int d) const {
    return std::polar(1.0, std::numbers::pi * d / root_order_);
  }

  Mat2 power(int d) const {
    const Complex td = unit_phase(d);
    const Complex p = 0.5 * (1.0 + td);
    const Complex q = 0.5 * (1.0 - td);
    return {p, q, q, p};
  }

  Mat2 gate() const { return power(1); }

  double angle(int d) const {
    return std::numbers::pi * d / (2.0 * root_order_);
  }

  double prob_one(int d) const {
    const double s = std::sin(angle(d));
    return s * s;
  }

  double prob_zero(int d) const {
    const double c = std::cos(angle(d));
    return c * c;
  }

 private:
  int root_order_;
};

}  // namespace qmaxsat
