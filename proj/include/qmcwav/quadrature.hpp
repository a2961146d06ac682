#pragma once

#include <vector>

namespace qmcwav {

// Nodes ascending on [-1, 1].
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Weight (1-x)^a (1+x)^b on [-1,1], a, b > -1. Nodes from the Golub-Welsch
// eigenproblem, polished by Newton steps on P_n^{(a,b)}; weights from the
// closed-form Christoffel numbers. Rules are cached; references stay valid.
const QuadRule& gauss_jacobi(int n, double a, double b);
const QuadRule& gauss_legendre(int n);

// Integral over [lo, hi] of (hi-t)^a (t-lo)^b g(t) by the n-point rule:
// sum_r w_r g(t_r), with mapped nodes and weights written to t, w.
void map_jacobi(int n, double a, double b, double lo, double hi, std::vector<double>& t, std::vector<double>& w);

}  // namespace qmcwav
