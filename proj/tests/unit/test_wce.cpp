#include <doctest.h>

#include <cmath>
#include <map>

#include "qmcwav/cubature.hpp"
#include "qmcwav/errors.hpp"
#include "qmcwav/nets.hpp"
#include "qmcwav/wce.hpp"

using namespace qmcwav;

namespace {

SpaceParams params(int b, int s, double alpha, double p = 2.0, double q = 2.0) {
  return SpaceParams{b, s, alpha, Exponent(p), Exponent(q)};
}

PointSet single(int b, int m, std::uint64_t num) {
  PointSet P(b, m, 1);
  const std::vector<std::uint64_t> v{num};
  P.push_back(v);
  return P;
}

// Dual sum over 1 <= j <= jmax for s = 1, p = q = 2, evaluating every wavelet
// at every point in floating point.
double dense_dual_sum(const PointSet& P, double alpha, int jmax) {
  const int b = P.base();
  const double N = static_cast<double>(P.size());
  double acc = 0;
  for (int j = 1; j <= jmax; ++j) {
    std::map<std::uint64_t, std::vector<double>> sums;
    for (std::size_t n = 0; n < P.size(); ++n) {
      const double x = P.coordinate(n, 0);
      const auto k = static_cast<std::uint64_t>(std::floor(x * std::pow(b, j - 1)));
      auto& row = sums[k];
      row.resize(b, 0.0);
      for (int i = 0; i < b; ++i) row[i] += psi_eval(b, j, i, k, x);
    }
    double level = 0;
    for (const auto& [k, row] : sums)
      for (double g : row) level += (g / N) * (g / N);
    acc += std::pow(b, -2.0 * alpha * j) * level;
  }
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("truncated dual sums match the exact-fraction oracle") {
  // Haar sums with exact fractions, p = q = 2.
  const WceBound a = wce_upper_dual(van_der_corput(2, 2), params(2, 1, 1.0), 5);
  CHECK(a.truncated == doctest::Approx(0.16535945694153691191).epsilon(1e-13));
  const WceBound b = wce_upper_dual(faure_net(2, 3, 2), params(2, 2, 0.75), 7);
  CHECK(b.truncated == doctest::Approx(0.43022875597088897162).epsilon(1e-13));
  const WceBound c = wce_upper_dual(faure_net(3, 2, 2), params(3, 2, 1.0), 5);
  CHECK(c.truncated == doctest::Approx(0.12670620838140454672).epsilon(1e-13));
  CHECK(a.t == 0);
  CHECK_FALSE(a.generic_tail);
}

TEST_CASE("levels up to m - t contribute nothing") {
  for (int m = 1; m <= 5; ++m) {
    const PointSet P = faure_net(2, m, 2);
    CHECK(wce_upper_dual(P, params(2, 2, 0.8), m).truncated == 0.0);
    CHECK(wce_upper_dual(P, params(2, 2, 0.8), m + 1).truncated > 0.0);
  }
}

TEST_CASE("single midpoint against the Hilbert value") {
  const PointSet P = single(2, 1, 1);
  const WceBound w = wce_upper_dual(P, params(2, 1, 1.0), 12);
  CHECK(w.truncated <= w.total);
  CHECK(w.total >= wce_exact_hilbert(P, 1.0));
  CHECK(wce_exact_hilbert(P, 1.0) == doctest::Approx(std::sqrt(1.0 / 12)).epsilon(1e-13));
}

TEST_CASE("q = 1 combines by max") {
  const WceBound w = wce_upper_dual(faure_net(2, 4, 2), params(2, 2, 0.75, 2.0, 1.0), 6);
  CHECK(w.total == std::max(w.truncated, w.tail));
  const WceBound v = wce_upper_dual(faure_net(3, 2, 1), params(3, 1, 1.0, 1.0, 1.0), 4);
  CHECK(v.total == std::max(v.truncated, v.tail));
}

TEST_CASE("tail majorises the dropped levels") {
  for (double alpha : {0.6, 0.75, 1.0})
    for (int s : {1, 2}) {
      const PointSet P = faure_net(2, 4, s);
      const SpaceParams sp = params(2, s, alpha);
      for (int J = 4; J <= 8; ++J) {
        const WceBound w = wce_upper_dual(P, sp, J);
        const WceBound w2 = wce_upper_dual(P, sp, 2 * J);
        CHECK(w2.total <= w.total + w.tail);
        CHECK(w2.truncated <= w.total * (1 + 1e-14));
        CHECK(w.tail >= 0.0);
      }
    }
}

TEST_CASE("dense dual sum lies between truncated and total") {
  for (int m = 0; m <= 4; ++m)
    for (double alpha : {0.6, 1.0}) {
      const PointSet P = van_der_corput(2, m);
      const WceBound w = wce_upper_dual(P, params(2, 1, alpha), std::max(m, 6));
      const double dense = dense_dual_sum(P, alpha, 20);
      CHECK(dense >= w.truncated * (1 - 1e-12));
      CHECK(dense <= w.total * (1 + 1e-12));
      CHECK(dense - w.truncated <= w.tail * (1 + 1e-12));
    }
}

TEST_CASE("upper bound validation") {
  CHECK_THROWS_AS(wce_upper_dual(van_der_corput(2, 3), params(2, 1, 0.5), 5), ValidationError);
  CHECK_THROWS_AS(wce_upper_dual(van_der_corput(2, 3), params(2, 1, 1.0), 2), ValidationError);
  // Not a power of b: generic tail.
  PointSet P(2, 3, 1);
  for (std::uint64_t n : {1, 4, 6}) {
    const std::vector<std::uint64_t> v{n};
    P.push_back(v);
  }
  const WceBound w = wce_upper_dual(P, params(2, 1, 1.0), 6);
  CHECK(w.generic_tail);
  CHECK(w.total >= wce_exact_hilbert(P, 1.0));
}

TEST_CASE("default j_max") {
  const SpaceParams sp = params(2, 1, 1.0);
  const int J = default_j_max(5, sp);
  CHECK(J > 5);
  CHECK(J <= 20);
  CHECK(default_j_max(0, sp) == 1);
}

TEST_CASE("mock lower bound") {
  const SpaceParams sp = params(2, 1, 1.0);
  const MockBound z = mock_lower_bound(single(2, 1, 0), sp, NormMode::exact);
  CHECK(z.m == 1);
  CHECK(z.integral == 0.5);
  CHECK(z.value == doctest::Approx(1 / std::sqrt(5.0)).epsilon(1e-14));
  // Exact fractions: integral 1/2, squared norm 65/4.
  const MockBound v = mock_lower_bound(van_der_corput(2, 2), sp, NormMode::exact);
  CHECK(v.integral == 0.5);
  CHECK(v.norm == doctest::Approx(std::sqrt(65.0) / 2).epsilon(1e-14));
  CHECK(v.value == doctest::Approx(0.12403473458920845619).epsilon(1e-14));
  CHECK(mock_level(4, 2) == 3);
  CHECK(mock_level(9, 3) == 3);
  CHECK(mock_level(1, 5) == 1);
}

TEST_CASE("mock function vanishes on P and analytic mode is weaker") {
  for (int b : {2, 3})
    for (int s : {1, 2})
      for (int m = 0; m <= (s == 1 ? 4 : 2); ++m) {
        const PointSet P = faure_net(b, m, s);
        const MockFunction f = build_mock_function(P);
        CHECK(qmc(P, f.f0) == 0.0);
        CHECK(f.integral == doctest::Approx(mock_integral(P, f.m)).epsilon(1e-15));
        CHECK(f.integral >= 0.5 * binomial(f.m + s - 1, s - 1));
        for (double alpha : {0.6, 1.0}) {
          const SpaceParams sp = params(b, s, alpha);
          const double ex = mock_lower_bound(P, sp, NormMode::exact).value;
          const double an = mock_lower_bound(P, sp, NormMode::analytic).value;
          CHECK(ex >= an * (1 - 1e-12));
        }
      }
}

TEST_CASE("mock and Hilbert values lie below the dual bound") {
  for (int b : {2, 3})
    for (int s : {1, 2})
      for (int m = 1; m <= (b == 2 ? 4 : 3); ++m)
        for (double alpha : {0.6, 0.75, 1.0}) {
          const PointSet P = faure_net(b, m, s);
          const SpaceParams sp = params(b, s, alpha);
          const double lower = mock_lower_bound(P, sp, NormMode::exact).value;
          const double upper = wce_upper_dual(P, sp).total;
          CHECK(lower <= upper);
          CHECK(wce_exact_hilbert(P, alpha) <= upper);
        }
}

TEST_CASE("the Haar mock bound does not bound the fractional Hilbert error") {
  // f_0 is a step function, outside the alpha = 1 fractional space, so the
  // two values are not ordered. This instance has the mock value above.
  const PointSet P = faure_net(2, 2, 2);
  const double lower = mock_lower_bound(P, params(2, 2, 1.0), NormMode::exact).value;
  const double hilbert = wce_exact_hilbert(P, 1.0);
  CHECK(lower == doctest::Approx(0.242536).epsilon(1e-5));
  CHECK(hilbert == doctest::Approx(0.240938).epsilon(1e-5));
  CHECK(lower > hilbert);
  // s = 1 keeps the ordering on the same nets.
  for (int m = 1; m <= 6; ++m)
    CHECK(mock_lower_bound(faure_net(2, m, 1), params(2, 1, 1.0), NormMode::exact).value <=
          wce_exact_hilbert(faure_net(2, m, 1), 1.0));
}

TEST_CASE("Hilbert value validation") {
  CHECK_THROWS_AS(wce_exact_hilbert(van_der_corput(2, 2), 0.5), ValidationError);
  CHECK_THROWS_AS(wce_exact_hilbert(van_der_corput(2, 2), 1.2), ValidationError);
}
