#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "qmcwav/errors.hpp"
#include "qmcwav/random.hpp"
#include "qmcwav/simd.hpp"

using namespace qmcwav;

namespace {

bool close(double a, double b, double rel) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) || std::abs(a - b) < 1e-300;
}

}  // namespace

TEST_CASE("scalar reference kernels") {
  const auto& k = simd::scalar_kernels();
  const double x[] = {0.1, 0.5, 0.5, 0.9};
  double out[4];
  k.shifted_power(x, 4, 0.5, 0.5, out);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 0.0);
  CHECK(out[3] == doctest::Approx(std::sqrt(0.4)));
  k.shifted_power(x, 4, 0.5, 0.0, out);
  CHECK(out[1] == 0.0);
  CHECK(out[3] == 1.0);
  k.shifted_power(x, 4, 0.5, -0.25, out);
  CHECK(std::isinf(out[1]));
  CHECK(out[0] == 0.0);
  const double u[] = {0.0, 1.0}, w[] = {2.0, 3.0};
  // v = 1 + 2u: 2 * 1^0.5 * 3^2 + 3 * 3^0.5 * 5^2
  CHECK(k.power_sum(u, w, 2, 1.0, 2.0, 0.5, 2.0, 2.0) == doctest::Approx(18 + 75 * std::sqrt(3.0)));
  CHECK(k.power_sum(u, w, 2, 1.0, 2.0, 0.0, 0.0, -1.0) == doctest::Approx(2.0 + 1.0));
  CHECK(k.dot(x, x, 4) == doctest::Approx(0.01 + 0.25 + 0.25 + 0.81));
}

TEST_CASE("AVX2 kernels match the scalar reference") {
  const simd::Kernels* v = simd::avx2_kernels();
  if (!v) {
    MESSAGE("AVX2 kernels unavailable on this host; equivalence not exercised");
    return;
  }
  const auto& s = simd::scalar_kernels();
  CounterRng rng(2024);
  for (std::size_t n : {1u, 3u, 4u, 7u, 16u, 33u, 1000u}) {
    std::vector<double> u(n), w(n), x(n), y(n), a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = rng.uniform();
      w[i] = rng.uniform() + 0.1;
      x[i] = rng.uniform();
      a[i] = rng.uniform() * 2 - 1;
      b[i] = rng.uniform() * 2 - 1;
    }
    for (double lo : {1e-12, 1e-3, 0.4})
      for (double h : {1e-9, 0.3})
        for (double pa : {0.0, -0.4, 0.75, 1.3})
          for (double shift : {0.0, 1e-8, 0.6})
            for (double c : {-0.9, -0.25, 0.0, 0.6, 2.0}) {
              const double rs = s.power_sum(u.data(), w.data(), static_cast<int>(n), lo, h, pa, shift, c);
              const double rv = v->power_sum(u.data(), w.data(), static_cast<int>(n), lo, h, pa, shift, c);
              CHECK(close(rs, rv, 1e-13));
            }
    for (double t : {0.0, 0.3, 0.999})
      for (double e : {-0.6, 0.0, 0.25, 1.0, 2.7}) {
        std::vector<double> o1(n), o2(n);
        std::vector<double> xt = x;
        xt[0] = t;  // equality case
        s.shifted_power(xt.data(), n, t, e, o1.data());
        v->shifted_power(xt.data(), n, t, e, o2.data());
        for (std::size_t i = 0; i < n; ++i) CHECK(close(o1[i], o2[i], 1e-13));
      }
    CHECK(close(s.dot(a.data(), b.data(), n), v->dot(a.data(), b.data(), n), 1e-12));
    std::vector<double> m1(n), m2(n);
    s.mul(a.data(), b.data(), m1.data(), n);
    v->mul(a.data(), b.data(), m2.data(), n);
    CHECK(m1 == m2);
  }
}

TEST_CASE("exp and log extremes in the vector kernels") {
  const simd::Kernels* v = simd::avx2_kernels();
  if (!v) return;
  const auto& s = simd::scalar_kernels();
  const double x[] = {1e-300, 1e-200, 0.5, 1e10, 1e300, 3.0, 7.0, 1.0};
  double o1[8], o2[8];
  for (double e : {-1.0, 0.3, 3.0, 20.0}) {
    s.shifted_power(x, 8, 0.0, e, o1);
    v->shifted_power(x, 8, 0.0, e, o2);
    for (int i = 0; i < 8; ++i) CHECK(close(o1[i], o2[i], 1e-13));
  }
}

TEST_CASE("dispatch") {
  CHECK(std::string(simd::active().name).size() > 0);
  simd::select("scalar");
  CHECK(std::string(simd::active().name) == "scalar");
  if (simd::avx2_kernels()) {
    simd::select("avx2");
    CHECK(std::string(simd::active().name) == "avx2");
  }
  CHECK_THROWS_AS(simd::select("neon"), ValidationError);
}
