#include <doctest.h>

#include <cmath>

#include "qmcwav/errors.hpp"
#include "qmcwav/quadrature.hpp"

using namespace qmcwav;

namespace {

// Integral of (1-x)^a (1+x)^b ((1+x)/2)^k over [-1,1], a Beta function.
double jacobi_moment(double a, double b, int k) { return std::pow(2.0, a + b + 1) * std::beta(b + k + 1, a + 1); }

}  // namespace

TEST_CASE("Gauss-Jacobi reference rule") {
  const QuadRule& r = gauss_jacobi(5, -0.4, 0.3);
  // scipy.special.roots_jacobi(5, -0.4, 0.3)
  const double nodes[] = {-0.8661407843007116, -0.4563169425961139, 0.10108066875618935, 0.6259991098687587,
                          0.9489133018072308};
  const double weights[] = {0.12167125909610259, 0.3665183015480881, 0.6147511733254291, 0.768682584228668,
                            0.721532993672807};
  REQUIRE(r.nodes.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(r.nodes[i] == doctest::Approx(nodes[i]).epsilon(1e-14));
    CHECK(r.weights[i] == doctest::Approx(weights[i]).epsilon(1e-13));
  }
}

TEST_CASE("Gauss-Jacobi is exact for polynomials of degree 2n-1") {
  for (double a : {-0.7, -0.25, 0.0, 0.6})
    for (double b : {-0.5, 0.0, 0.35})
      for (int n : {1, 4, 12, 40}) {
        const QuadRule& r = gauss_jacobi(n, a, b);
        for (int k : {0, 1, n, 2 * n - 1}) {
          double q = 0;
          for (int i = 0; i < n; ++i) q += r.weights[i] * std::pow((1 + r.nodes[i]) / 2, k);
          CHECK(q == doctest::Approx(jacobi_moment(a, b, k)).epsilon(1e-12));
        }
      }
  const QuadRule& g = gauss_legendre(7);
  double sum = 0;
  for (int i = 0; i < 7; ++i) sum += g.weights[i] * std::pow(g.nodes[i], 12);
  CHECK(sum == doctest::Approx(2.0 / 13).epsilon(1e-15));
  CHECK_THROWS_AS(gauss_jacobi(3, -1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(gauss_jacobi(0, 0.0, 0.0), ValidationError);
}

TEST_CASE("map_jacobi integrates algebraic endpoint weights") {
  std::vector<double> t, w;
  for (double a : {-0.6, 0.0, 0.4})
    for (double b : {-0.3, 0.0}) {
      map_jacobi(6, a, b, 0.2, 0.9, t, w);
      double q = 0, q1 = 0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        q += w[i];
        q1 += w[i] * t[i];
        CHECK(t[i] > 0.2);
        CHECK(t[i] < 0.9);
      }
      const double L = 0.7;
      CHECK(q == doctest::Approx(std::pow(L, a + b + 1) * std::beta(a + 1, b + 1)).epsilon(1e-14));
      // int (hi-t)^a (t-lo)^b t = lo * B(a+1,b+1) L^{a+b+1} + B(a+1,b+2) L^{a+b+2}
      const double want = 0.2 * std::pow(L, a + b + 1) * std::beta(a + 1, b + 1) +
                          std::pow(L, a + b + 2) * std::beta(a + 1, b + 2);
      CHECK(q1 == doctest::Approx(want).epsilon(1e-14));
    }
}
