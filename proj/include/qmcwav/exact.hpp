#pragma once

#include <gmpxx.h>

#include <string>

namespace qmcwav {

// Exact value r * b^{h/2} with r rational. Normalised so h is 0 or 1, which
// makes the representation unique; zero is stored with h = 0.
class RootScaled {
 public:
  RootScaled() : base_(2), h_(0) {}
  RootScaled(int base, mpq_class r, int half_exponent = 0);

  int base() const { return base_; }
  const mpq_class& rational() const { return r_; }
  int half_exponent() const { return h_; }

  bool is_zero() const { return sgn(r_) == 0; }
  double to_double() const;
  std::string to_string() const;

  RootScaled operator-() const;
  // Sums require equal half-exponents unless one operand is zero.
  RootScaled operator+(const RootScaled& o) const;
  RootScaled operator-(const RootScaled& o) const;
  RootScaled operator*(const RootScaled& o) const;

  // Exact comparison of absolute values.
  static int compare_abs(const RootScaled& a, const RootScaled& b);

  friend bool operator==(const RootScaled& a, const RootScaled& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return a.base_ == b.base_ && a.h_ == b.h_ && a.r_ == b.r_;
  }

 private:
  void normalize();

  int base_;
  mpq_class r_;
  int h_;
};

}  // namespace qmcwav
