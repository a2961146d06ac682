#include <cmath>
#include <limits>

#include "qmcwav/simd.hpp"

namespace qmcwav::simd {

namespace {

double power_sum(const double* u, const double* w, int n, double lo, double h, double a, double shift, double c) {
  double total = 0.0;
  for (int r = 0; r < n; ++r) {
    const double v = lo + h * u[r];
    double term = w[r] * std::pow(v + shift, c);
    if (a != 0.0) term *= std::pow(v, a);
    total += term;
  }
  return total;
}

void shifted_power(const double* x, std::size_t n, double t, double e, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - t;
    if (d > 0.0)
      out[i] = e == 0.0 ? 1.0 : std::pow(d, e);
    else if (d == 0.0 && e < 0.0)
      out[i] = std::numeric_limits<double>::infinity();
    else
      out[i] = 0.0;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += a[i] * b[i];
  return total;
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", power_sum, shifted_power, dot, mul};
  return k;
}

}  // namespace qmcwav::simd
