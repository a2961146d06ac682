#include <algorithm>
#include <cmath>
#include <string>

#include "frac_internal.hpp"
#include "qmcwav/errors.hpp"
#include "qmcwav/fractional.hpp"
#include "qmcwav/quadrature.hpp"
#include "qmcwav/random.hpp"
#include "qmcwav/simd.hpp"

namespace qmcwav {

const char* to_string(DiscMethod m) {
  switch (m) {
    case DiscMethod::warnock: return "warnock";
    case DiscMethod::tensor_quad: return "quad";
    case DiscMethod::monte_carlo: return "mc";
  }
  return "?";
}

DiscMethod parse_disc_method(const std::string& text) {
  if (text == "warnock") return DiscMethod::warnock;
  if (text == "quad" || text == "tensor-quad") return DiscMethod::tensor_quad;
  if (text == "mc" || text == "monte-carlo") return DiscMethod::monte_carlo;
  throw ValidationError("unknown discrepancy method '" + text + "'");
}

namespace {

using detail::pairwise_sum;

// D* from the per-subset integrals of |Delta|^{p'}.
double combine_subsets(const std::vector<double>& I, double pp, const Exponent& qprime) {
  double acc = 0.0;
  for (double v : I) {
    const double norm = std::pow(std::max(v, 0.0), 1.0 / pp);
    acc = qprime.is_infinite() ? std::max(acc, norm) : acc + std::pow(norm, qprime.value());
  }
  return qprime.is_infinite() ? acc : std::pow(acc, 1.0 / qprime.value());
}

// D* is increasing in every I_u, so shifting all I_u by +-err brackets it.
double propagate(const std::vector<double>& I, const std::vector<double>& err, double pp, const Exponent& qprime) {
  std::vector<double> up(I), down(I);
  for (std::size_t k = 0; k < I.size(); ++k) {
    up[k] += err[k];
    down[k] = std::max(0.0, down[k] - err[k]);
  }
  const double mid = combine_subsets(I, pp, qprime);
  return std::max(combine_subsets(up, pp, qprime) - mid, mid - combine_subsets(down, pp, qprime));
}

DiscrepancyResult warnock(const PointSet& P, double alpha) {
  if (!(alpha > 0.5)) throw ValidationError("frac_discrepancy: warnock needs alpha > 1/2");
  const int s = P.dim();
  const std::size_t N = P.size();
  const auto x = P.coordinates_by_dim();
  const double A = kernel_A(alpha);
  const double term1 = std::pow(1.0 + A, s) - 1.0;
  const bool closed = alpha == 1.0;
  const detail::PowerIntegral pi(alpha);

  auto Bv = [&](double v) -> KernelValue {
    if (closed) return {v - 0.5 * v * v, v - 0.5 * v * v};
    const KernelValue r = pi(v, 1.0 - v, alpha);
    return {r.value / alpha, r.coarse / alpha};
  };
  auto Cv = [&](double a, double b) -> KernelValue {
    if (closed) return {std::min(a, b), std::min(a, b)};
    return pi(std::min(a, b), std::abs(a - b), alpha - 1.0);
  };

  std::vector<double> bf(N), bc(N);
  for (std::size_t n = 0; n < N; ++n) {
    double pf = 1.0, pc = 1.0;
    for (int l = 0; l < s; ++l) {
      const KernelValue k = Bv(x[l][n]);
      pf *= 1.0 + k.value;
      pc *= 1.0 + k.coarse;
    }
    bf[n] = pf - 1.0;
    bc[n] = pc - 1.0;
  }
  const double term2f = 2.0 * pairwise_sum(bf.data(), N) / static_cast<double>(N);
  const double term2c = 2.0 * pairwise_sum(bc.data(), N) / static_cast<double>(N);

  // Row n holds the diagonal term plus twice the terms n' > n.
  std::vector<double> rowf(N), rowc(N), rf(N), rc(N);
  for (std::size_t n = 0; n < N; ++n) {
    std::size_t cnt = 0;
    for (std::size_t k = n; k < N; ++k, ++cnt) {
      double pf = 1.0, pc = 1.0;
      for (int l = 0; l < s; ++l) {
        const KernelValue c = Cv(x[l][n], x[l][k]);
        pf *= 1.0 + c.value;
        pc *= 1.0 + c.coarse;
      }
      const double mult = k == n ? 1.0 : 2.0;
      rf[cnt] = mult * (pf - 1.0);
      rc[cnt] = mult * (pc - 1.0);
    }
    rowf[n] = pairwise_sum(rf.data(), cnt);
    rowc[n] = pairwise_sum(rc.data(), cnt);
  }
  const double n2 = static_cast<double>(N) * static_cast<double>(N);
  const double term3f = pairwise_sum(rowf.data(), N) / n2;
  const double term3c = pairwise_sum(rowc.data(), N) / n2;

  const double d2f = std::max(0.0, term1 - term2f + term3f);
  const double d2c = std::max(0.0, term1 - term2c + term3c);
  DiscrepancyResult r;
  r.method = DiscMethod::warnock;
  r.value = std::sqrt(d2f);
  r.error_estimate = std::abs(r.value - std::sqrt(d2c));
  return r;
}

// One-dimensional rule for coordinate l at refinement k. Weights already
// include the division by the Jacobi weight, so sum_r w_r F(t_r) approximates
// int_0^1 F for F = |Delta|^{p'} restricted to this coordinate.
// Nodes carry their distance u to the panel's right end `anchor`, so that
// (x_n - t) is formed as (x_n - anchor) + u and stays exact at x_n = anchor.
struct Rule1D {
  std::vector<double> t, w, u, anchor;
};

std::vector<double> breakpoints(const std::vector<double>& coords) {
  std::vector<double> b{0.0};
  for (double v : coords)
    if (v > 0.0 && v < 1.0) b.push_back(v);
  b.push_back(1.0);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

Rule1D tensor_rule(const std::vector<double>& bp, double alpha, double pp, int level) {
  const int n = 8 + 4 * level;
  const int G = 12 + 12 * level;
  const double beta = pp * (1.0 - alpha);
  Rule1D r;
  std::vector<double> t, w;
  auto push = [&r](double hi, double u, double weight) {
    r.t.push_back(hi - u);
    r.u.push_back(u);
    r.anchor.push_back(hi);
    r.w.push_back(weight);
  };
  // Legendre panel [hi - u1, hi - u0] in the distance variable.
  auto add_legendre = [&](double hi, double u0, double u1, int nodes) {
    map_jacobi(nodes, 0.0, 0.0, u0, u1, t, w);
    for (int k = 0; k < nodes; ++k) push(hi, t[k], w[k]);
  };
  for (std::size_t c = 0; c + 1 < bp.size(); ++c) {
    const double lo = bp[c], hi = bp[c + 1];
    const double W = hi - lo;
    if (hi == 1.0) {
      // Only alpha^{-1}(1-t)^alpha survives here, so |Delta|^{p'} carries (1-t)^{alpha p'} exactly.
      const double a = alpha * pp;
      map_jacobi(n, 0.0, a, 0.0, W, t, w);
      for (int k = 0; k < n; ++k) push(hi, t[k], w[k] / std::pow(t[k], a));
      continue;
    }
    if (beta == 0.0) {
      const int pieces = 1 << level;
      const double h = W / pieces;
      for (int q = 0; q < pieces; ++q) add_legendre(hi, q * h, (q + 1) * h, 8);
      continue;
    }
    for (int g = 1; g <= G; ++g) add_legendre(hi, W * std::ldexp(1.0, -g), W * std::ldexp(1.0, 1 - g), n);
    map_jacobi(n, 0.0, -beta, 0.0, W * std::ldexp(1.0, -G), t, w);
    for (int k = 0; k < n; ++k) push(hi, t[k], w[k] * std::pow(t[k], beta));
  }
  return r;
}

// Per-node data for coordinate l: a = alpha^{-1}(1-t)^alpha and g[n] = (x_n - t)_+^{alpha-1}.
struct NodeData {
  std::vector<double> a;
  std::vector<double> g;  // node-major, N entries per node
};

NodeData node_data(const Rule1D& r, const std::vector<double>& x, double alpha) {
  const simd::Kernels& k = simd::active();
  const std::size_t N = x.size(), M = r.t.size();
  NodeData d;
  d.a.resize(M);
  d.g.resize(M * N);
  const double e = alpha - 1.0;
  std::vector<double> rel(N);
  double anchor = NAN;
  for (std::size_t i = 0; i < M; ++i) {
    if (r.anchor[i] != anchor) {
      anchor = r.anchor[i];
      for (std::size_t n = 0; n < N; ++n) rel[n] = x[n] - anchor;
    }
    d.a[i] = std::pow(1.0 - r.anchor[i] + r.u[i], alpha) / alpha;
    k.shifted_power(rel.data(), N, -r.u[i], e, d.g.data() + i * N);
  }
  return d;
}

// int |Delta(., u, P)|^{p'} over [0,1]^u on the tensor of the given rules.
double tensor_integral(const std::vector<const Rule1D*>& rules, const std::vector<const NodeData*>& data,
                       std::size_t N, double pp) {
  const simd::Kernels& k = simd::active();
  const int d = static_cast<int>(rules.size());
  const double invN = 1.0 / static_cast<double>(N);
  std::vector<double> h(N), h2(N);
  auto f = [&](double first, double dot, double w) { return w * std::pow(std::abs(first - invN * dot), pp); };
  std::vector<double> partial;
  const Rule1D& r0 = *rules[0];
  const NodeData& d0 = *data[0];
  partial.reserve(r0.t.size());
  for (std::size_t i0 = 0; i0 < r0.t.size(); ++i0) {
    const double* g0 = d0.g.data() + i0 * N;
    if (d == 1) {
      double sum = 0.0;
      for (std::size_t n = 0; n < N; ++n) sum += g0[n];
      partial.push_back(f(d0.a[i0], sum, r0.w[i0]));
      continue;
    }
    const Rule1D& r1 = *rules[1];
    const NodeData& d1 = *data[1];
    std::vector<double> inner;
    inner.reserve(r1.t.size());
    for (std::size_t i1 = 0; i1 < r1.t.size(); ++i1) {
      const double* g1 = d1.g.data() + i1 * N;
      const double a01 = d0.a[i0] * d1.a[i1];
      const double w01 = r0.w[i0] * r1.w[i1];
      if (d == 2) {
        inner.push_back(f(a01, k.dot(g0, g1, N), w01));
        continue;
      }
      k.mul(g0, g1, h.data(), N);
      const Rule1D& r2 = *rules[2];
      const NodeData& d2 = *data[2];
      double acc = 0.0;
      for (std::size_t i2 = 0; i2 < r2.t.size(); ++i2)
        acc += f(a01 * d2.a[i2], k.dot(h.data(), d2.g.data() + i2 * N, N), w01 * r2.w[i2]);
      inner.push_back(acc);
    }
    partial.push_back(pairwise_sum(inner.data(), inner.size()));
  }
  return pairwise_sum(partial.data(), partial.size());
}

DiscrepancyResult tensor_quad(const PointSet& P, double alpha, double pp, const Exponent& qprime,
                              const DiscrepancyOptions& opt) {
  const int s = P.dim();
  if (s > 3) throw ValidationError("frac_discrepancy: tensor-quad supports s <= 3");
  const std::size_t N = P.size();
  const auto x = P.coordinates_by_dim();
  std::vector<std::vector<double>> bp(s);
  for (int l = 0; l < s; ++l) bp[l] = breakpoints(x[l]);

  auto evaluate = [&](int level, std::vector<double>& I) -> bool {
    std::vector<Rule1D> rules(s);
    std::vector<NodeData> data(s);
    for (int l = 0; l < s; ++l) rules[l] = tensor_rule(bp[l], alpha, pp, level);
    I.clear();
    for (Subset u = 1; u < (Subset{1} << s); ++u) {
      double pts = 1.0;
      for (int l : detail::subset_dims(u)) pts *= static_cast<double>(rules[l].t.size());
      if (pts > static_cast<double>(opt.node_budget)) return false;
    }
    for (int l = 0; l < s; ++l) data[l] = node_data(rules[l], x[l], alpha);
    for (Subset u = 1; u < (Subset{1} << s); ++u) {
      std::vector<const Rule1D*> rr;
      std::vector<const NodeData*> dd;
      for (int l : detail::subset_dims(u)) {
        rr.push_back(&rules[l]);
        dd.push_back(&data[l]);
      }
      I.push_back(tensor_integral(rr, dd, N, pp));
    }
    return true;
  };

  std::vector<double> prev, cur;
  if (!evaluate(0, prev)) throw BudgetExceeded("frac_discrepancy: tensor-quad node budget exceeded");
  DiscrepancyResult r;
  r.method = DiscMethod::tensor_quad;
  r.converged = false;
  double prev_value = combine_subsets(prev, pp, qprime);
  bool have_two = false;
  for (int level = 1; evaluate(level, cur); ++level) {
    have_two = true;
    const double value = combine_subsets(cur, pp, qprime);
    std::vector<double> diff(cur.size());
    for (std::size_t k = 0; k < cur.size(); ++k) diff[k] = std::abs(cur[k] - prev[k]);
    r.value = value;
    r.error_estimate = std::max(std::abs(value - prev_value), propagate(cur, diff, pp, qprime));
    prev = cur;
    prev_value = value;
    if (r.error_estimate <= opt.tol * std::max(value, 1e-300)) {
      r.converged = true;
      break;
    }
  }
  if (!have_two) throw BudgetExceeded("frac_discrepancy: tensor-quad budget allows no refinement");
  for (Subset u = 1; u < (Subset{1} << s); ++u) r.per_u.emplace_back(u, prev[u - 1]);
  return r;
}

DiscrepancyResult monte_carlo(const PointSet& P, double alpha, double pp, const Exponent& qprime,
                              const DiscrepancyOptions& opt) {
  if (opt.samples < 2) throw ValidationError("frac_discrepancy: monte-carlo needs at least 2 samples");
  const int s = P.dim();
  if (s > 20) throw ValidationError("frac_discrepancy: monte-carlo supports s <= 20");
  const std::size_t N = P.size();
  const auto x = P.coordinates_by_dim();
  std::vector<std::vector<double>> bp(s);
  for (int l = 0; l < s; ++l) bp[l] = breakpoints(x[l]);
  // Within a panel ending at a point coordinate, t = hi - W v^kappa with
  // 1/kappa = 1 - beta keeps the weighted samples square integrable.
  const double beta = pp * (1.0 - alpha);
  const double kappa = 1.0 / (1.0 - beta);
  const simd::Kernels& k = simd::active();
  std::vector<double> I, err;
  std::vector<double> t, h(N), g(N);
  for (Subset u = 1; u < (Subset{1} << s); ++u) {
    const std::vector<int> dims = detail::subset_dims(u);
    const std::uint64_t seed = counter_hash(opt.seed, u);
    double mean = 0.0, m2 = 0.0;
    t.resize(dims.size());
    for (std::size_t i = 0; i < opt.samples; ++i) {
      double weight = 1.0, first = 1.0;
      std::fill(h.begin(), h.end(), 1.0);
      for (std::size_t a = 0; a < dims.size(); ++a) {
        const std::vector<double>& b = bp[dims[a]];
        const double t0 = counter_uniform(seed, i * dims.size() + a);
        const std::size_t c = static_cast<std::size_t>(std::upper_bound(b.begin(), b.end(), t0) - b.begin()) - 1;
        const double lo = b[c], hi = b[c + 1], W = hi - lo;
        double tt = t0;
        if (hi < 1.0 && kappa != 1.0) {
          const double v = (hi - t0) / W;
          const double r = W * std::pow(v, kappa);
          tt = hi - r;
          weight *= kappa * std::pow(r / W, 1.0 - 1.0 / kappa);
        }
        first *= std::pow(1.0 - tt, alpha) / alpha;
        k.shifted_power(x[dims[a]].data(), N, tt, alpha - 1.0, g.data());
        k.mul(h.data(), g.data(), h.data(), N);
      }
      double sum = 0.0;
      for (std::size_t n = 0; n < N; ++n) sum += h[n];
      const double val = weight * std::pow(std::abs(first - sum / static_cast<double>(N)), pp);
      const double delta = val - mean;
      mean += delta / static_cast<double>(i + 1);
      m2 += delta * (val - mean);
    }
    const double var = m2 / static_cast<double>(opt.samples - 1);
    I.push_back(mean);
    err.push_back(3.0 * std::sqrt(var / static_cast<double>(opt.samples)));
  }
  DiscrepancyResult r;
  r.method = DiscMethod::monte_carlo;
  r.value = combine_subsets(I, pp, qprime);
  r.error_estimate = propagate(I, err, pp, qprime);
  for (Subset u = 1; u < (Subset{1} << s); ++u) r.per_u.emplace_back(u, I[u - 1]);
  return r;
}

}  // namespace

DiscrepancyResult frac_discrepancy(const PointSet& P, double alpha, const Exponent& pprime, const Exponent& qprime,
                                   DiscMethod method, const DiscrepancyOptions& opt) {
  if (P.size() == 0) throw ValidationError("frac_discrepancy: empty point set");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("frac_discrepancy: alpha must lie in (0,1]");
  if (pprime.is_infinite()) throw ValidationError("frac_discrepancy: p' = inf is not supported");
  const double pp = pprime.value();
  if (alpha < 1.0 && !(pp * (1.0 - alpha) < 1.0))
    throw ValidationError("frac_discrepancy: need p'(1 - alpha) < 1");
  switch (method) {
    case DiscMethod::warnock:
      if (!(pprime == Exponent(2.0) && qprime == Exponent(2.0)))
        throw ValidationError("frac_discrepancy: warnock needs p' = q' = 2");
      return warnock(P, alpha);
    case DiscMethod::tensor_quad:
      return tensor_quad(P, alpha, pp, qprime, opt);
    case DiscMethod::monte_carlo:
      return monte_carlo(P, alpha, pp, qprime, opt);
  }
  throw ValidationError("frac_discrepancy: unknown method");
}

double l2_star_discrepancy(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw ValidationError("l2_star_discrepancy: empty point set");
  const std::size_t N = points.size();
  const std::size_t s = points[0].size();
  for (const auto& p : points)
    if (p.size() != s) throw ValidationError("l2_star_discrepancy: ragged point set");
  double mid = 0.0;
  for (const auto& p : points) {
    double prod = 1.0;
    for (double v : p) prod *= 0.5 * (1.0 - v * v);
    mid += prod;
  }
  double dbl = 0.0;
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t k = 0; k < N; ++k) {
      double prod = 1.0;
      for (std::size_t l = 0; l < s; ++l) prod *= 1.0 - std::max(points[n][l], points[k][l]);
      dbl += prod;
    }
  const double Nd = static_cast<double>(N);
  const double d2 = std::pow(3.0, -static_cast<double>(s)) - 2.0 * mid / Nd + dbl / (Nd * Nd);
  return std::sqrt(std::max(0.0, d2));
}

double rkhs_worst_case_error(const PointSet& P, double alpha) {
  if (!(alpha > 0.5 && alpha <= 1.0)) throw ValidationError("rkhs_worst_case_error: alpha must lie in (1/2, 1]");
  if (P.size() == 0) throw ValidationError("rkhs_worst_case_error: empty point set");
  const int s = P.dim();
  const std::size_t N = P.size();
  constexpr int kLevels = 26, kNodes = 10;
  // Kernel mean int_0^1 K(x, y) dy; the kink of K(x, .) at y = x is a panel end.
  auto mean = [&](double xv) {
    auto f = [&](double y) { return kernel_K(alpha, xv, y); };
    return detail::graded_integral(f, 0.0, xv, kLevels, kNodes) + detail::graded_integral(f, xv, 1.0, kLevels, kNodes);
  };
  const double total = detail::graded_integral(mean, 0.0, 1.0, kLevels, kNodes);
  double mid = 0.0;
  std::vector<double> xn(s), xk(s);
  for (std::size_t n = 0; n < N; ++n) {
    double prod = 1.0;
    for (int l = 0; l < s; ++l) prod *= mean(P.coordinate(n, l));
    mid += prod;
  }
  double dbl = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    for (int l = 0; l < s; ++l) xn[l] = P.coordinate(n, l);
    for (std::size_t k = 0; k < N; ++k) {
      for (int l = 0; l < s; ++l) xk[l] = P.coordinate(k, l);
      dbl += kernel_Ks(alpha, xn, xk);
    }
  }
  const double Nd = static_cast<double>(N);
  const double e2 = std::pow(total, s) - 2.0 * mid / Nd + dbl / (Nd * Nd);
  return std::sqrt(std::max(0.0, e2));
}

}  // namespace qmcwav
