#include "qmcwav/wce.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qmcwav/cubature.hpp"
#include "qmcwav/errors.hpp"
#include "qmcwav/fractional.hpp"
#include "qmcwav/nets.hpp"

namespace qmcwav {

int default_j_max(int L, const SpaceParams& sp) {
  const double lb = std::log(static_cast<double>(sp.b));
  const int cap = std::max(4 * L, L + 1);
  const double gap = sp.alpha - sp.p.reciprocal();
  const Exponent qd = sp.q_dual();
  double extra = sp.s * std::log(2.0) / lb;
  if (!qd.is_infinite()) {
    if (gap <= 0) return cap;
    extra += 40.0 * std::log(2.0) / (qd.value() * gap * lb);
  }
  const double j = L + std::ceil(extra);
  return j >= cap ? cap : static_cast<int>(j);
}

namespace {

double log_binomial(int n, int k) {
  if (k < 0 || k > n) return -INFINITY;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log of the per-level factor F(J): sum over (k,i) of |sum_p Psi(p)|^{p'}
// raised to 1/p' is at most F(J) b^{|j|/2}.
struct TailFactor {
  bool generic;
  double log_b, log_N, inv_pd;
  int L, t, b;
  double operator()(int J) const {
    if (generic) return log_N + J * inv_pd * log_b + J * std::log(1.0 - 1.0 / b);
    return ((L + 1) * inv_pd + t - 1) * log_b + J * std::log(b - 1.0);
  }
};

double tail_bound(const SpaceParams& sp, int j_max, std::size_t N, const TailFactor& F) {
  const int s = sp.s;
  const double log_b = std::log(static_cast<double>(sp.b));
  const double gap = sp.alpha - sp.p.reciprocal();
  const double log_N = std::log(static_cast<double>(N));
  const Exponent qd = sp.q_dual();
  if (qd.is_infinite()) {
    // sup over nu > j_max of b^{-gap nu} max_{J <= min(s,nu)} F(J) / N.
    double best = -INFINITY;
    for (int nu = j_max + 1; nu <= j_max + s + 1; ++nu)
      for (int J = 1; J <= std::min(s, nu); ++J) best = std::max(best, -gap * nu * log_b + F(J));
    return std::exp(best - log_N);
  }
  const double qv = qd.value();
  auto log_term = [&](int nu) {
    double acc = -INFINITY;
    for (int J = 1; J <= std::min(s, nu); ++J) {
      const double v = log_binomial(s, J) + log_binomial(nu - 1, J - 1) + qv * F(J);
      acc = std::max(acc, v) + std::log1p(std::exp(std::min(acc, v) - std::max(acc, v)));
    }
    return acc - qv * gap * nu * log_b - qv * log_N;
  };
  const double r = std::exp(-qv * gap * log_b);
  double sum = 0.0;
  for (int nu = j_max + 1; nu < j_max + 1000000; ++nu) {
    const double term = std::exp(log_term(nu));
    sum += term;
    if (nu >= s) {
      // term(nu+1)/term(nu) <= r nu / (nu - s + 1), non-increasing in nu.
      const double rho = r * nu / (nu - s + 1.0);
      if (rho < 1.0) {
        const double rest = term * rho / (1.0 - rho);
        if (rest <= 1e-18 * sum || sum == 0.0) return std::pow(sum + rest, 1.0 / qv);
      }
    }
  }
  throw BudgetExceeded("wce tail: series did not settle");
}

}  // namespace

WceBound wce_upper_dual(const PointSet& P, const SpaceParams& sp_in, std::optional<int> j_max,
                        std::optional<int> t_in) {
  SpaceParams sp = sp_in;
  sp.validate();
  if (sp.b != P.base() || sp.s != P.dim()) throw ValidationError("wce_upper_dual: base or dimension mismatch");
  if (!sp.eval_ok()) throw ValidationError("wce_upper_dual: point evaluation unbounded (need alpha > 1/p, or >= for q = 1)");
  const std::size_t N = P.size();
  if (N == 0) throw ValidationError("wce_upper_dual: empty point set");
  WceBound out;
  out.params = sp;
  const int m = P.log_size();
  int L = 0;
  if (m >= 0) {
    out.t = t_in ? *t_in : t_value(P);
    if (out.t < 0 || out.t > m) throw ValidationError("wce_upper_dual: t out of range");
    L = m - out.t;
  } else {
    if (t_in) throw ValidationError("wce_upper_dual: |P| is not a power of b, t is meaningless");
    out.generic_tail = true;
  }
  out.j_max = j_max ? *j_max : default_j_max(L, sp);
  if (out.j_max < L) throw ValidationError("wce_upper_dual: j_max below m - t");

  const Exponent pd = sp.p_dual(), qd = sp.q_dual();
  const double b = sp.b;
  const double gap = sp.alpha - sp.p.reciprocal();
  double acc = 0.0;
  for (int nu = 1; nu <= out.j_max; ++nu) {
    for_each_composition(nu, sp.s, [&](const std::vector<int>& j) {
      LevelHistogram h(P, j);
      double block = 0.0;
      for (const auto& g : h.groups())
        for (std::int64_t v : g.sums) {
          const double a = std::abs(static_cast<double>(v));
          if (pd.is_infinite())
            block = std::max(block, a);
          else if (pd.value() == 2.0)
            block += a * a;
          else
            block += std::pow(a, pd.value());
        }
      const double norm = pd.is_infinite() ? block : std::pow(block, 1.0 / pd.value());
      // |Q(Psi)| = |g| b^{|j|/2 - J} / N, weighted by b^{-(alpha - 1/p + 1/2)|j|}.
      const double term = norm * std::pow(b, -gap * nu - h.active()) / static_cast<double>(N);
      if (qd.is_infinite())
        acc = std::max(acc, term);
      else
        acc += std::pow(term, qd.value());
    });
  }
  out.truncated = qd.is_infinite() ? acc : std::pow(acc, 1.0 / qd.value());

  TailFactor F{out.generic_tail, std::log(b), std::log(static_cast<double>(N)), pd.reciprocal(), L, out.t, sp.b};
  out.tail = tail_bound(sp, out.j_max, N, F);
  if (qd.is_infinite())
    out.total = std::max(out.truncated, out.tail);
  else
    out.total = std::pow(std::pow(out.truncated, qd.value()) + std::pow(out.tail, qd.value()), 1.0 / qd.value());
  return out;
}

double nets_constant(int b, int t, int s, double alpha, const Exponent& p, const Exponent& q) {
  const double gap = alpha - p.reciprocal();
  const double lead = std::pow(b - 1.0, s) * std::pow(static_cast<double>(b), alpha * (t - 1));
  const Exponent qd = q.conjugate();
  if (qd.is_infinite()) return lead;
  if (gap <= 0) throw ValidationError("nets_constant: need alpha > 1/p");
  const double qv = qd.value();
  double sum = 0.0;
  for (int nu = 0; nu < 100000; ++nu) {
    const double term = std::pow(static_cast<double>(b), -qv * gap * nu) * std::pow(1.0 + s + nu, s - 1) /
                        std::tgamma(static_cast<double>(s));
    sum += term;
    if (term < 1e-17 * sum && nu > 10) break;
  }
  return lead * std::pow(sum, 1.0 / qv);
}

int mock_level(std::size_t N, int b) {
  if (N == 0) throw ValidationError("mock: empty point set");
  int m = 0;
  std::uint64_t v = 1;
  while (v < 2 * static_cast<std::uint64_t>(N)) {
    v *= static_cast<std::uint64_t>(b);
    ++m;
  }
  return m;
}

namespace {

// Occupied level-j cells as a bitmap over b^{|j|} mixed-radix keys.
std::vector<bool> occupancy(const PointSet& P, const std::vector<int>& j) {
  const auto b = static_cast<std::uint64_t>(P.base());
  std::uint64_t cells = 1;
  for (int v : j) cells *= ipow(b, v);
  std::vector<bool> occ(cells, false);
  for (std::size_t n = 0; n < P.size(); ++n) {
    std::uint64_t key = 0;
    for (int l = 0; l < P.dim(); ++l) key = key * ipow(b, j[l]) + locate_coord(P.point(n), l, j[l]);
    occ[key] = true;
  }
  return occ;
}

}  // namespace

double mock_integral(const PointSet& P, int m) {
  double total = 0.0;
  const auto b = static_cast<std::uint64_t>(P.base());
  for_each_composition(m, P.dim(), [&](const std::vector<int>& j) {
    const auto occ = occupancy(P, j);
    const auto empty = static_cast<double>(std::count(occ.begin(), occ.end(), false));
    total += empty;
  });
  return total / static_cast<double>(ipow(b, m));
}

MockFunction build_mock_function(const PointSet& P, std::size_t cell_budget) {
  const int m = mock_level(P.size(), P.base());
  const int s = P.dim();
  const auto b = static_cast<std::uint64_t>(P.base());
  const std::uint64_t side = ipow(b, m);
  if (!ipow_fits(side, s) || ipow(side, s) > cell_budget)
    throw BudgetExceeded("mock function: level-" + std::to_string(m) + " grid exceeds the cell budget");
  MockFunction mf{m, PiecewiseConstantD(P.base(), m, s), 0.0};
  std::vector<std::uint64_t> cell(s);
  for_each_composition(m, s, [&](const std::vector<int>& j) {
    const auto occ = occupancy(P, j);
    std::vector<std::uint64_t> shrink(s), radix(s);
    for (int l = 0; l < s; ++l) {
      shrink[l] = ipow(b, m - j[l]);
      radix[l] = ipow(b, j[l]);
    }
    std::fill(cell.begin(), cell.end(), 0);
    for (std::size_t c = 0; c < mf.f0.cells(); ++c) {
      std::uint64_t key = 0;
      for (int l = 0; l < s; ++l) key = key * radix[l] + cell[l] / shrink[l];
      if (!occ[key]) mf.f0[c] += 1.0;
      int l = s - 1;
      while (l >= 0 && ++cell[l] == side) cell[l--] = 0;
    }
  });
  double total = 0.0;
  for (double v : mf.f0.values()) total += v;
  mf.integral = total / static_cast<double>(mf.f0.cells());
  return mf;
}

MockBound mock_lower_bound(const PointSet& P, const SpaceParams& sp, NormMode mode, std::size_t cell_budget) {
  sp.validate();
  if (sp.b != P.base() || sp.s != P.dim()) throw ValidationError("mock_lower_bound: base or dimension mismatch");
  MockBound out;
  out.mode = mode;
  if (mode == NormMode::exact) {
    const MockFunction mf = build_mock_function(P, cell_budget);
    out.m = mf.m;
    out.integral = mf.integral;
    out.norm = haar_norm(mf.f0, sp);
  } else {
    out.m = mock_level(P.size(), P.base());
    out.integral = mock_integral(P, out.m);
    const int s = sp.s;
    const double b = sp.b, a = sp.alpha;
    if (sp.q.is_infinite()) {
      double best = 0.0;
      for (int nu = 0; nu < 10000; ++nu)
        best = std::max(best, std::exp(-a * nu * std::log(b) + log_binomial(nu + s - 1, s - 1)));
      out.norm = std::pow(b - 1.0, s) * best * std::pow(b, a * out.m);
    } else {
      const double q = sp.q.value();
      double sum = 0.0;
      for (int nu = 0; nu < 100000; ++nu) {
        const double term = std::exp(-q * a * nu * std::log(b) + q * log_binomial(nu + s - 1, s - 1));
        sum += term;
        if (nu > 10 && term < 1e-17 * sum) break;
      }
      const double Cq = s * std::pow(b - 1.0, q * s) * sum;
      out.norm = std::pow(Cq, 1.0 / q) * std::pow(b, a * out.m) * std::pow(static_cast<double>(out.m), (s - 1) / q);
    }
  }
  out.value = out.norm > 0 ? out.integral / out.norm : 0.0;
  return out;
}

double wce_exact_hilbert(const PointSet& P, double alpha) {
  if (!(alpha > 0.5 && alpha <= 1.0)) throw ValidationError("wce_exact_hilbert: need alpha in (1/2, 1]");
  return frac_discrepancy(P, alpha, Exponent(2.0), Exponent(2.0), DiscMethod::warnock).value;
}

}  // namespace qmcwav
