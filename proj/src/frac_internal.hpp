#pragma once

#include <cstddef>
#include <vector>

#include "qmcwav/fractional.hpp"

namespace qmcwav::detail {

double pairwise_sum(const double* v, std::size_t n);

// int_0^x v^{alpha-1} (v + delta)^c dv on a graded composite rule: one
// Gauss-Jacobi panel [0, min(x, delta)] carrying v^{alpha-1}, then
// Gauss-Legendre panels doubling in width. Every Legendre panel [a, 2a] sits
// at relative distance >= 1 from the singularity at -delta.
class PowerIntegral {
 public:
  explicit PowerIntegral(double alpha);
  KernelValue operator()(double x, double delta, double c) const;

 private:
  double alpha_;
  std::vector<double> ju_, jw_, ju_coarse_, jw_coarse_;
  std::vector<double> lu_, lw_, lu_coarse_, lw_coarse_;
};

// Integral over [a, b] with Gauss-Legendre panels graded geometrically toward
// both endpoints.
template <class F>
double graded_integral(F&& f, double a, double b, int levels, int n);

std::vector<int> subset_dims(Subset u);

}  // namespace qmcwav::detail

#include <cmath>

#include "qmcwav/quadrature.hpp"

namespace qmcwav::detail {

template <class F>
double graded_integral(F&& f, double a, double b, int levels, int n) {
  if (!(b > a)) return 0.0;
  const QuadRule& r = gauss_legendre(n);
  auto panel = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(c + h * r.nodes[i]);
    return s * h;
  };
  const double mid = 0.5 * (a + b);
  const double half = mid - a;
  double total = 0.0;
  for (int side = 0; side < 2; ++side) {
    const double end = side == 0 ? a : b;
    const double dir = side == 0 ? 1.0 : -1.0;
    double w = half;
    for (int g = 0; g < levels; ++g) {
      const double far = end + dir * w, near = end + dir * w * 0.5;
      total += side == 0 ? panel(near, far) : panel(far, near);
      w *= 0.5;
    }
    total += side == 0 ? panel(end, end + dir * w) : panel(end + dir * w, end);
  }
  return total;
}

}  // namespace qmcwav::detail
