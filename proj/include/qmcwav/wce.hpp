#pragma once

#include <optional>

#include "qmcwav/badic.hpp"
#include "qmcwav/haar.hpp"

namespace qmcwav {

struct WceBound {
  double truncated = 0.0;  // dual sum over 1 <= |j| <= j_max, exact wavelet values
  double tail = 0.0;       // majorant of the levels |j| > j_max
  double total = 0.0;
  SpaceParams params;
  int j_max = 0;
  int t = 0;
  bool generic_tail = false;  // P not a (t,m,s)-net; per-cell cap N used
};

// j_max = L + ceil(s log_b 2 + 40 ln 2 / (q' (alpha - 1/p) ln b)), capped at
// max(4L, L+1), with L = m - t.
int default_j_max(int L, const SpaceParams& sp);

// Upper bound on the worst-case error of Q_P over the Haar wavelet space.
// With t given the caller vouches that P is a (t,m,s)-net; otherwise t is
// measured when |P| is a power of b and the generic tail is used if not.
WceBound wce_upper_dual(const PointSet& P, const SpaceParams& sp, std::optional<int> j_max = std::nullopt,
                        std::optional<int> t = std::nullopt);

// Reporting constant C(b,t,s,alpha,p,q) of the net error bound.
double nets_constant(int b, int t, int s, double alpha, const Exponent& p, const Exponent& q);

// Smallest m with 2N <= b^m.
int mock_level(std::size_t N, int b);

// f_0 = sum over |j| = m of the indicators of the level-j cells without
// points of P, as cell counts on the level-m grid.
struct MockFunction {
  int m = 0;
  PiecewiseConstantD f0;
  double integral = 0.0;
};

MockFunction build_mock_function(const PointSet& P, std::size_t cell_budget = std::size_t{1} << 24);
// Integral of f_0 by counting occupied cells; no grid needed.
double mock_integral(const PointSet& P, int m);

enum class NormMode { exact, analytic };

struct MockBound {
  double value = 0.0;  // integral / norm
  double integral = 0.0;
  double norm = 0.0;
  int m = 0;
  NormMode mode = NormMode::exact;
};

// Certified lower bound on the worst-case error over the span of the
// approximation spaces. Exact mode enumerates all coefficients of f_0.
MockBound mock_lower_bound(const PointSet& P, const SpaceParams& sp, NormMode mode,
                           std::size_t cell_budget = std::size_t{1} << 24);

// Worst-case error on the fractional Hilbert space H_{alpha,s,2,2}.
double wce_exact_hilbert(const PointSet& P, double alpha);

}  // namespace qmcwav
