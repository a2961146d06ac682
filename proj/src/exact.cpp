#include "qmcwav/exact.hpp"

#include <cmath>

#include "qmcwav/errors.hpp"

namespace qmcwav {

RootScaled::RootScaled(int base, mpq_class r, int half_exponent)
    : base_(base), r_(std::move(r)), h_(half_exponent) {
  if (base < 2) throw ValidationError("RootScaled: base must be >= 2");
  r_.canonicalize();
  normalize();
}

void RootScaled::normalize() {
  if (sgn(r_) == 0) {
    h_ = 0;
    return;
  }
  // Move b^{floor(h/2)} into the rational part.
  int whole = h_ >= 0 ? h_ / 2 : -((-h_ + 1) / 2);
  h_ -= 2 * whole;
  if (whole != 0) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(base_), static_cast<unsigned long>(std::abs(whole)));
    if (whole > 0)
      r_ *= p;
    else
      r_ /= p;
  }
}

double RootScaled::to_double() const {
  const double v = r_.get_d();
  return h_ ? v * std::sqrt(static_cast<double>(base_)) : v;
}

std::string RootScaled::to_string() const {
  std::string out = r_.get_str();
  if (h_) out += "*sqrt(" + std::to_string(base_) + ")";
  return out;
}

RootScaled RootScaled::operator-() const { return RootScaled(base_, -r_, h_); }

RootScaled RootScaled::operator+(const RootScaled& o) const {
  if (o.is_zero()) return *this;
  if (is_zero()) return o;
  if (base_ != o.base_ || h_ != o.h_)
    throw ValidationError("RootScaled: sum of values with different irrational parts");
  return RootScaled(base_, r_ + o.r_, h_);
}

RootScaled RootScaled::operator-(const RootScaled& o) const { return *this + (-o); }

RootScaled RootScaled::operator*(const RootScaled& o) const {
  if (is_zero() || o.is_zero()) return RootScaled(base_, 0);
  if (base_ != o.base_) throw ValidationError("RootScaled: product across bases");
  return RootScaled(base_, r_ * o.r_, h_ + o.h_);
}

int RootScaled::compare_abs(const RootScaled& a, const RootScaled& b) {
  // Compare r_a^2 b^{h_a} with r_b^2 b^{h_b}.
  mpq_class x = a.r_ * a.r_, y = b.r_ * b.r_;
  if (a.h_) x *= a.base_;
  if (b.h_) y *= b.base_;
  return cmp(x, y);
}

}  // namespace qmcwav
