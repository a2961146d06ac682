#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qmcwav/errors.hpp"
#include "qmcwav/haar.hpp"
#include "qmcwav/random.hpp"

using namespace qmcwav;

namespace {

const double r2 = std::sqrt(2.0);

WaveletIndex idx1(int j, std::uint64_t k, int i) { return WaveletIndex{{j}, {k}, {i}}; }

// 1_{[1/2,1)} on the level-1 grid, b = 2.
PiecewiseConstantD upper_half() { return PiecewiseConstantD(2, 1, 1, {0.0, 1.0}); }

// Midpoint of every level-m cell, coordinate 0 most significant.
std::vector<double> cell_midpoint(std::size_t c, std::uint64_t side, int s) {
  std::vector<double> x(s);
  for (int l = s - 1; l >= 0; --l) {
    x[l] = (static_cast<double>(c % side) + 0.5) / static_cast<double>(side);
    c /= side;
  }
  return x;
}

PiecewiseConstantD random_pc(int b, int m, int s, std::uint64_t seed) {
  CounterRng rng(seed);
  PiecewiseConstantD f(b, m, s);
  for (std::size_t c = 0; c < f.cells(); ++c) f[c] = 2.0 * rng.uniform() - 1.0;
  return f;
}

}  // namespace

TEST_CASE("Exponent") {
  CHECK(Exponent(2.0).conjugate() == Exponent(2.0));
  CHECK(Exponent(1.0).conjugate().is_infinite());
  CHECK(Exponent::infinity().conjugate() == Exponent(1.0));
  CHECK(Exponent::parse("inf").is_infinite());
  CHECK(Exponent(4.0).conjugate().value() == doctest::Approx(4.0 / 3.0));
  CHECK_THROWS_AS(Exponent(0.5), ValidationError);
  CHECK_THROWS_AS(Exponent::parse("x"), ValidationError);
  CHECK_THROWS_AS(Exponent::infinity().value(), ValidationError);
}

TEST_CASE("eval_ok") {
  CHECK(SpaceParams{2, 1, 0.5, Exponent(2.0), Exponent(1.0)}.eval_ok());
  CHECK_FALSE(SpaceParams{2, 1, 0.5, Exponent(2.0), Exponent(2.0)}.eval_ok());
  CHECK(SpaceParams{2, 1, 0.51, Exponent(2.0), Exponent(2.0)}.eval_ok());
}

TEST_CASE("psi_eval") {
  CHECK(psi_eval(2, 1, 0, 0, 0.25) == doctest::Approx(1 / r2).epsilon(1e-15));
  CHECK(psi_eval(2, 1, 0, 0, 0.75) == doctest::Approx(-1 / r2).epsilon(1e-15));
  for (int b : {2, 3, 5}) CHECK(psi_eval(b, 0, 0, 0, 0.3) == 1.0);
  // Sup norm b^{j/2}(1 - 1/b).
  CHECK(psi_eval(3, 2, 1, 2, 2.0 / 3 + 1.5 / 9) == doctest::Approx(3.0 * (2.0 / 3.0)));
  CHECK_THROWS_AS(psi_eval(2, 1, 2, 0, 0.1), ValidationError);
  CHECK_THROWS_AS(psi_eval(2, 2, 0, 2, 0.1), ValidationError);
}

TEST_CASE("Psi_eval") {
  const std::vector<double> x{0.25, 0.25};
  CHECK(Psi_eval(2, WaveletIndex::zero(2), x) == 1.0);
  CHECK(Psi_eval(2, WaveletIndex{{1, 1}, {0, 0}, {0, 0}}, x) == doctest::Approx(0.5).epsilon(1e-15));
  const std::vector<double> y{0.25, 0.9};
  CHECK(Psi_eval(2, WaveletIndex{{2, 0}, {1, 0}, {0, 0}}, y) == 0.0);
}

TEST_CASE("inner products of piecewise constants") {
  const PiecewiseConstantD one(2, 2, 1, {1, 1, 1, 1});
  CHECK(inner_product_pc(one, idx1(0, 0, 0)) == 1.0);
  CHECK(inner_product_pc(one, idx1(2, 1, 1)) == 0.0);
  const auto f = upper_half();
  CHECK(inner_product_pc(f, idx1(1, 0, 1)) == doctest::Approx(1 / (2 * r2)).epsilon(1e-15));
  CHECK(inner_product_pc(f, idx1(1, 0, 0)) == doctest::Approx(-1 / (2 * r2)).epsilon(1e-15));
  CHECK(inner_product_pc(f, idx1(0, 0, 0)) == 0.5);
  CHECK_THROWS_AS(inner_product_pc(f, idx1(2, 0, 0)), ValidationError);

  const PiecewiseConstantQ fq(2, 1, 1, {mpq_class(0), mpq_class(1)});
  const RootScaled e = inner_product_pc(fq, idx1(1, 0, 1));
  CHECK(e == RootScaled(2, mpq_class(1, 4), 1));
}

TEST_CASE("float inner products match the exact path") {
  CounterRng rng(5);
  for (int b : {2, 3}) {
    PiecewiseConstantQ fq(b, 3, 1);
    PiecewiseConstantD fd(b, 3, 1);
    for (std::size_t c = 0; c < fq.cells(); ++c) {
      const long v = static_cast<long>(rng.next() % 17) - 8;
      fq[c] = mpq_class(v, 4);
      fd[c] = static_cast<double>(v) / 4;
    }
    for (int j = 0; j <= 3; ++j)
      for (std::uint64_t k = 0; k < (j <= 1 ? 1 : ipow(b, j - 1)); ++k)
        for (int i = 0; i < (j == 0 ? 1 : b); ++i) {
          const double exact = inner_product_pc(fq, idx1(j, k, i)).to_double();
          const double fl = inner_product_pc(fd, idx1(j, k, i));
          CHECK(std::abs(fl - exact) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(exact)));
        }
  }
}

TEST_CASE("coeff_smooth") {
  auto x = [](std::span<const double> v) { return v[0]; };
  for (int b : {2, 3, 5})
    for (int j = 1; j <= 3; ++j)
      for (int i = 0; i < b; ++i) {
        const double want = 0.5 * (2 * i + 1 - b) * std::pow(b, -1.5 * j);
        CHECK(coeff_smooth(x, b, idx1(j, 0, i), 1e-13) == doctest::Approx(want).epsilon(1e-12));
      }
  CHECK(coeff_smooth(x, 2, idx1(0, 0, 0), 1e-13) == doctest::Approx(0.5));
  auto c = [](std::span<const double>) { return 3.0; };
  CHECK(std::abs(coeff_smooth(c, 3, idx1(2, 1, 2), 1e-13)) < 1e-14);
  auto xy = [](std::span<const double> v) { return std::exp(v[0]) * v[1]; };
  // Separable: product of one-dimensional coefficients.
  const double ex = coeff_smooth([](std::span<const double> v) { return std::exp(v[0]); }, 2, idx1(2, 1, 0), 1e-14);
  const double lin = coeff_smooth(x, 2, idx1(1, 0, 1), 1e-14);
  CHECK(coeff_smooth(xy, 2, WaveletIndex{{2, 1}, {1, 0}, {0, 1}}, 1e-14) == doctest::Approx(ex * lin).epsilon(1e-12));
}

TEST_CASE("haar_norm") {
  CoeffMap unit(2, 1);
  unit.set(idx1(0, 0, 0), 1.0);
  for (double a : {0.6, 1.0})
    for (auto p : {Exponent(1.0), Exponent(2.0), Exponent::infinity()})
      CHECK(haar_norm(unit, SpaceParams{2, 1, a, p, Exponent(2.0)}) == 1.0);

  const SpaceParams sp{2, 1, 1.0, Exponent(2.0), Exponent(2.0)};
  const CoeffMap c = analyze(upper_half());
  CHECK(haar_norm(c, sp) == doctest::Approx(std::sqrt(5.0) / 2).epsilon(1e-15));
  CHECK(haar_norm(upper_half(), sp) == doctest::Approx(std::sqrt(5.0) / 2).epsilon(1e-15));

  CoeffMap scaled(2, 1);
  for (const auto& [k, v] : c.entries()) scaled.set(k, -3.0 * v);
  CHECK(haar_norm(scaled, sp) == doctest::Approx(3 * std::sqrt(5.0) / 2).epsilon(1e-15));
}

TEST_CASE("norms are monotone in (p, q)") {
  const std::vector<Exponent> ex{Exponent(1.0), Exponent(1.5), Exponent(2.0), Exponent(4.0), Exponent::infinity()};
  for (int s : {1, 2}) {
    const auto f = random_pc(2, s == 1 ? 4 : 2, s, 11 + s);
    const CoeffMap c = analyze(f);
    for (std::size_t a = 0; a < ex.size(); ++a)
      for (std::size_t b = 0; b <= a; ++b)
        for (std::size_t qa = 0; qa < ex.size(); ++qa)
          for (std::size_t qb = qa; qb < ex.size(); ++qb) {
            // (p1, q1) = (ex[a], ex[qa]) with p1 >= p2 = ex[b], q1 <= q2 = ex[qb].
            const double n1 = haar_norm(c, SpaceParams{2, s, 0.8, ex[a], ex[qa]});
            const double n2 = haar_norm(c, SpaceParams{2, s, 0.8, ex[b], ex[qb]});
            CHECK(n1 >= n2 * (1 - 1e-13));
          }
  }
}

TEST_CASE("series_eval") {
  CoeffMap unit(3, 2);
  unit.set(WaveletIndex::zero(2), 1.0);
  const std::vector<double> x{0.1, 0.9};
  CHECK(series_eval(unit, x) == 1.0);
  const CoeffMap c = analyze(upper_half());
  CHECK(series_eval(c, std::vector<double>{0.75}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(series_eval(c, std::vector<double>{0.25})) < 1e-15);
  CHECK(evaluation_constant(2, 1.0, Exponent(2.0), Exponent(2.0)) == doctest::Approx(2.0).epsilon(1e-15));
  const double bound = evaluation_constant(2, 1.0, Exponent(2.0), Exponent(2.0)) *
                       haar_norm(c, SpaceParams{2, 1, 1.0, Exponent(2.0), Exponent(2.0)});
  for (double t : {0.1, 0.6, 0.99}) CHECK(std::abs(series_eval(c, std::vector<double>{t})) <= bound);
}

TEST_CASE("reconstruction and zero-sum on random piecewise constants") {
  for (int b : {2, 3})
    for (int s : {1, 2}) {
      const int m = s == 1 ? 3 : 2;
      const auto f = random_pc(b, m, s, 100 * b + s);
      const CoeffMap c = analyze(f);
      CHECK(c.satisfies_zero_sum(1e-13));
      for (std::size_t cell = 0; cell < f.cells(); ++cell) {
        const auto x = cell_midpoint(cell, f.side(), s);
        CHECK(series_eval(c, x) == doctest::Approx(f[cell]).epsilon(1e-12));
      }
    }
}

TEST_CASE("L2 norm of a series is controlled by the Haar norm") {
  const SpaceParams sp{2, 1, 1.0, Exponent(2.0), Exponent(2.0)};
  const double C = evaluation_constant(2, 1.0, sp.p, sp.q);
  CounterRng rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    CoeffMap c(2, 1);
    c.set(idx1(0, 0, 0), rng.uniform() - 0.5);
    for (int j = 1; j <= 4; ++j)
      for (std::uint64_t k = 0; k < (j == 1 ? 1u : ipow(2, j - 1)); ++k) {
        const double v = rng.uniform() - 0.5;
        c.set(idx1(j, k, 0), v);
        c.set(idx1(j, k, 1), -v);
      }
    REQUIRE(c.satisfies_zero_sum(0.0));
    double l1 = 0, l2 = 0;
    const int cells = 16;
    for (int cell = 0; cell < cells; ++cell) {
      const double v = series_eval(c, std::vector<double>{(cell + 0.5) / cells});
      l1 += std::abs(v) / cells;
      l2 += v * v / cells;
    }
    CHECK(l2 <= C * l1 * haar_norm(c, sp) * (1 + 1e-12));
  }
}

TEST_CASE("frame identities") {
  const double g = inner_product_pc(
      PiecewiseConstantD(2, 1, 1, {psi_eval(2, 1, 1, 0, 0.25), psi_eval(2, 1, 1, 0, 0.75)}), idx1(1, 0, 0));
  CHECK(g == doctest::Approx(-0.5).epsilon(1e-15));
  PiecewiseConstantD p3(3, 1, 1);
  for (int c = 0; c < 3; ++c) p3[c] = psi_eval(3, 1, 0, 0, (c + 0.5) / 3);
  CHECK(inner_product_pc(p3, idx1(1, 0, 0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  for (double x = 0; x < 1; x += 1.0 / 64) CHECK(psi_eval(2, 2, 0, 1, x) + psi_eval(2, 2, 1, 1, x) == 0.0);

  for (int b : {2, 3, 5})
    for (int j = 1; j <= 4; ++j) {
      if (b == 5 && j == 4) continue;
      for (std::uint64_t k = 0; k < (j == 1 ? 1u : ipow(b, j - 1)); k += (j == 1 ? 1 : ipow(b, j - 1) - 1 > 0 ? ipow(b, j - 1) - 1 : 1)) {
        const FrameReport r = frame_check(b, j, k, j + 1);
        CHECK(r.exact);
        CHECK(r.max_deviation == 0.0);
        CHECK(r.sum_checks > 0);
        CHECK(r.gram_checks > 0);
      }
    }
}

TEST_CASE("coefficient and piecewise constant IO round trip") {
  const auto f = random_pc(3, 2, 2, 9);
  std::stringstream bin;
  write_piecewise_constant(bin, f);
  const auto g = read_piecewise_constant(bin);
  CHECK(g.values() == f.values());
  CHECK(g.base() == 3);

  const CoeffMap c = analyze(f);
  std::stringstream text;
  write_coeff_map(text, c);
  const CoeffMap d = read_coeff_map(text, 3, 2);
  REQUIRE(d.size() == c.size());
  for (const auto& [k, v] : c.entries()) CHECK(d.get(k) == v);
}
