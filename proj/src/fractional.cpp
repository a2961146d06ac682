#include "qmcwav/fractional.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "frac_internal.hpp"
#include "qmcwav/errors.hpp"
#include "qmcwav/quadrature.hpp"
#include "qmcwav/simd.hpp"

namespace qmcwav {

int subset_size(Subset u) { return std::popcount(u); }

namespace detail {

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

std::vector<int> subset_dims(Subset u) {
  std::vector<int> d;
  for (int l = 0; l < 32; ++l)
    if (u >> l & 1u) d.push_back(l);
  return d;
}

namespace {

constexpr int kFine = 16;
constexpr int kCoarse = 8;

void unit_rule(const QuadRule& r, double scale, std::vector<double>& u, std::vector<double>& w) {
  u.resize(r.nodes.size());
  w.resize(r.nodes.size());
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    u[i] = 0.5 * (r.nodes[i] + 1.0);
    w[i] = scale * r.weights[i];
  }
}

}  // namespace

PowerIntegral::PowerIntegral(double alpha) : alpha_(alpha) {
  const double js = std::pow(2.0, -alpha);
  unit_rule(gauss_jacobi(kFine, 0.0, alpha - 1.0), js, ju_, jw_);
  unit_rule(gauss_jacobi(kCoarse, 0.0, alpha - 1.0), js, ju_coarse_, jw_coarse_);
  unit_rule(gauss_legendre(kFine), 0.5, lu_, lw_);
  unit_rule(gauss_legendre(kCoarse), 0.5, lu_coarse_, lw_coarse_);
}

KernelValue PowerIntegral::operator()(double x, double delta, double c) const {
  if (!(x > 0.0)) return {0.0, 0.0};
  if (delta == 0.0) {
    const double v = std::pow(x, alpha_ + c) / (alpha_ + c);
    return {v, v};
  }
  const simd::Kernels& k = simd::active();
  const double L = std::min(x, delta);
  const double La = std::pow(L, alpha_);
  double fine = La * k.power_sum(ju_.data(), jw_.data(), kFine, 0.0, L, 0.0, delta, c);
  double coarse = La * k.power_sum(ju_coarse_.data(), jw_coarse_.data(), kCoarse, 0.0, L, 0.0, delta, c);
  double lo = L;
  while (lo < x) {
    const double hi = std::min(2.0 * lo, x);
    const double h = hi - lo;
    fine += h * k.power_sum(lu_.data(), lw_.data(), kFine, lo, h, alpha_ - 1.0, delta, c);
    coarse += h * k.power_sum(lu_coarse_.data(), lw_coarse_.data(), kCoarse, lo, h, alpha_ - 1.0, delta, c);
    lo = hi;
  }
  return {fine, coarse};
}

}  // namespace detail

namespace {

void check_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError(std::string(what) + ": argument outside [0,1]");
}

// Doubles n from n0 while the rule changes by more than tol relative.
template <class Q>
double converge(Q&& q, int n0, int n_max, double tol) {
  double prev = q(n0);
  for (int n = 2 * n0; n <= n_max; n *= 2) {
    const double cur = q(n);
    if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

double frac_integral(const std::function<double(double)>& ftilde, double alpha, double x, double tol) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("frac_integral: alpha must lie in (0,1]");
  check_unit(x, "frac_integral");
  if (x == 0.0) return 0.0;
  std::vector<double> t, w;
  const double g = std::tgamma(alpha);
  return converge(
      [&](int n) {
        map_jacobi(n, alpha - 1.0, 0.0, 0.0, x, t, w);
        double s = 0.0;
        for (int r = 0; r < n; ++r) s += w[r] * ftilde(t[r]);
        return s / g;
      },
      64, 2048, tol);
}

namespace {

// (1/Gamma(1-alpha)) int_0^y (f(t) - f0)(y - t)^{-alpha} dt.
double rl_integral(const std::function<double(double)>& f, double alpha, double y, bool anchored) {
  if (y == 0.0) return 0.0;
  const double f0 = anchored ? f(0.0) : 0.0;
  std::vector<double> t, w;
  const double g = std::tgamma(1.0 - alpha);
  return converge(
      [&](int n) {
        double s = 0.0;
        if (anchored) {
          // The extra t^alpha in the weight absorbs the leading behaviour of f - f(0).
          map_jacobi(n, -alpha, alpha, 0.0, y, t, w);
          for (int r = 0; r < n; ++r) s += w[r] * (f(t[r]) - f0) / std::pow(t[r], alpha);
        } else {
          map_jacobi(n, -alpha, 0.0, 0.0, y, t, w);
          for (int r = 0; r < n; ++r) s += w[r] * f(t[r]);
        }
        return s / g;
      },
      32, 512, 1e-15);
}

double rl_diff(const std::function<double(double)>& f, double alpha, double x, double h, bool anchored) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("rl_derivative: alpha must lie in (0,1)");
  if (!(h > 0.0)) throw ValidationError("rl_derivative: step must be positive");
  if (!(x - h > 0.0 && x + h <= 1.0)) throw ValidationError("rl_derivative: stencil leaves (0,1]");
  return (rl_integral(f, alpha, x + h, anchored) - rl_integral(f, alpha, x - h, anchored)) / (2.0 * h);
}

}  // namespace

double rl_derivative(const std::function<double(double)>& f, double alpha, double x, double h) {
  return rl_diff(f, alpha, x, h, true);
}

double rl_derivative_unanchored(const std::function<double(double)>& f, double alpha, double x, double h) {
  return rl_diff(f, alpha, x, h, false);
}

FracFunction::FracFunction(double a, int dim) : alpha(a), s(dim) {
  if (!(a > 0.0 && a <= 1.0)) throw ValidationError("FracFunction: alpha must lie in (0,1]");
  if (dim < 1 || dim > 31) throw ValidationError("FracFunction: need 1 <= s <= 31");
}

void FracFunction::set_density(Subset u, Density d) {
  if (u == 0) throw ValidationError("FracFunction: the empty-set density is the constant");
  if (u >> s) throw ValidationError("FracFunction: subset outside {0..s-1}");
  densities[u] = std::move(d);
}

double phi_term(const FracFunction& F, Subset u, std::span<const double> x, double tol) {
  if (static_cast<int>(x.size()) != F.s) throw ValidationError("phi_term: dimension mismatch");
  for (double v : x) check_unit(v, "phi_term");
  if (u == 0) return F.constant;
  auto it = F.densities.find(u);
  if (it == F.densities.end()) throw ValidationError("phi_term: missing density");
  const std::vector<int> dims = detail::subset_dims(u);
  const int d = static_cast<int>(dims.size());
  for (int l : dims)
    if (x[l] == 0.0) return 0.0;
  const double scale = std::pow(std::tgamma(F.alpha), -d);
  std::vector<std::vector<double>> t(d), w(d);
  std::vector<double> pt(d);
  int n_max = 16;
  while (std::pow(2.0 * n_max, d) <= double(1 << 22) && n_max < 1024) n_max *= 2;
  return converge(
      [&](int n) {
        for (int a = 0; a < d; ++a) map_jacobi(n, F.alpha - 1.0, 0.0, 0.0, x[dims[a]], t[a], w[a]);
        std::vector<int> idx(d, 0);
        double total = 0.0;
        while (true) {
          double wt = 1.0;
          for (int a = 0; a < d; ++a) {
            pt[a] = t[a][idx[a]];
            wt *= w[a][idx[a]];
          }
          total += wt * it->second(pt);
          int a = d - 1;
          while (a >= 0 && ++idx[a] == n) idx[a--] = 0;
          if (a < 0) break;
        }
        return scale * total;
      },
      16, n_max, tol);
}

double phi_synthesize(const FracFunction& F, std::span<const double> x, double tol) {
  double total = F.constant;
  for (const auto& [u, d] : F.densities) total += phi_term(F, u, x, tol);
  return total;
}

double anchored_term(const std::function<double(std::span<const double>)>& f, int s, Subset u,
                     std::span<const double> x) {
  if (static_cast<int>(x.size()) != s) throw ValidationError("anchored_term: dimension mismatch");
  if (u >> s) throw ValidationError("anchored_term: subset outside {0..s-1}");
  std::vector<double> y(s);
  double total = 0.0;
  Subset v = u;
  while (true) {
    for (int l = 0; l < s; ++l) y[l] = (v >> l & 1u) ? x[l] : 0.0;
    total += ((subset_size(u) - subset_size(v)) % 2 ? -1.0 : 1.0) * f(y);
    if (v == 0) break;
    v = (v - 1) & u;
  }
  return total;
}

namespace {

void check_kernel_alpha(double alpha) {
  if (!(alpha > 0.5 && alpha <= 1.0)) throw ValidationError("kernel: alpha must lie in (1/2, 1]");
}

}  // namespace

double kernel_A(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("kernel_A: alpha must lie in (0,1]");
  return 1.0 / (alpha * alpha * (2.0 * alpha + 1.0));
}

KernelValue kernel_B_est(double alpha, double x) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("kernel_B: alpha must lie in (0,1]");
  check_unit(x, "kernel_B");
  if (alpha == 1.0) {
    const double v = x - 0.5 * x * x;
    return {v, v};
  }
  const KernelValue r = detail::PowerIntegral(alpha)(x, 1.0 - x, alpha);
  return {r.value / alpha, r.coarse / alpha};
}

KernelValue kernel_C_est(double alpha, double x, double y) {
  check_kernel_alpha(alpha);
  check_unit(x, "kernel_C");
  check_unit(y, "kernel_C");
  if (alpha == 1.0) {
    const double v = std::min(x, y);
    return {v, v};
  }
  return detail::PowerIntegral(alpha)(std::min(x, y), std::abs(x - y), alpha - 1.0);
}

double kernel_B(double alpha, double x) { return kernel_B_est(alpha, x).value; }
double kernel_C(double alpha, double x, double y) { return kernel_C_est(alpha, x, y).value; }
double kernel_K(double alpha, double x, double y) { return 1.0 + kernel_C(alpha, x, y); }

double kernel_Ks(double alpha, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("kernel_Ks: dimension mismatch");
  double p = 1.0;
  for (std::size_t l = 0; l < x.size(); ++l) p *= kernel_K(alpha, x[l], y[l]);
  return p;
}

SingularValue delta_alpha(std::span<const double> t_u, Subset u, const PointSet& P, double alpha) {
  if (u == 0) throw ValidationError("delta_alpha: u must be nonempty");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("delta_alpha: alpha must lie in (0,1]");
  if (u >> P.dim()) throw ValidationError("delta_alpha: subset outside the dimension");
  const std::vector<int> dims = detail::subset_dims(u);
  if (t_u.size() != dims.size()) throw ValidationError("delta_alpha: t_u has the wrong length");
  if (P.size() == 0) throw ValidationError("delta_alpha: empty point set");
  double first = 1.0;
  for (double t : t_u) {
    check_unit(t, "delta_alpha");
    first *= std::pow(1.0 - t, alpha) / alpha;
  }
  SingularValue out;
  double sum = 0.0;
  for (std::size_t n = 0; n < P.size(); ++n) {
    double prod = 1.0;
    bool hit = false;
    for (std::size_t a = 0; a < dims.size() && prod != 0.0; ++a) {
      const double d = P.coordinate(n, dims[a]) - t_u[a];
      if (d < 0.0 || (d == 0.0 && alpha == 1.0))
        prod = 0.0;
      else if (d == 0.0)
        hit = true;
      else if (alpha != 1.0)
        prod *= std::pow(d, alpha - 1.0);
    }
    if (prod == 0.0) continue;
    if (hit) out.singular = true;
    sum += prod;
  }
  out.value = out.singular ? -std::numeric_limits<double>::infinity()
                           : first - sum / static_cast<double>(P.size());
  return out;
}

namespace {

// || ftilde_u ||_{L_p([0,1]^u)} by tensor Gauss-Legendre.
double density_norm(const Density& f, int d, const Exponent& p, double tol) {
  std::vector<double> pt(d);
  int n_max = 16;
  while (std::pow(2.0 * n_max, d) <= double(1 << 22) && n_max < 1024) n_max *= 2;
  auto eval = [&](int n) {
    const QuadRule& r = gauss_legendre(n);
    std::vector<int> idx(d, 0);
    double total = 0.0;
    while (true) {
      double wt = 1.0;
      for (int a = 0; a < d; ++a) {
        pt[a] = 0.5 * (r.nodes[idx[a]] + 1.0);
        wt *= 0.5 * r.weights[idx[a]];
      }
      const double v = std::abs(f(pt));
      total = p.is_infinite() ? std::max(total, v) : total + wt * std::pow(v, p.value());
      int a = d - 1;
      while (a >= 0 && ++idx[a] == n) idx[a--] = 0;
      if (a < 0) break;
    }
    return p.is_infinite() ? total : std::pow(total, 1.0 / p.value());
  };
  return converge(eval, 16, n_max, tol);
}

double combine(const std::vector<double>& terms, const Exponent& q) {
  double acc = 0.0;
  for (double t : terms) acc = q.is_infinite() ? std::max(acc, t) : acc + std::pow(t, q.value());
  return q.is_infinite() ? acc : std::pow(acc, 1.0 / q.value());
}

}  // namespace

double seminorm_V(const FracFunction& F, const Exponent& p, const Exponent& q, double tol) {
  std::vector<double> terms;
  const double g = std::tgamma(F.alpha);
  for (const auto& [u, d] : F.densities) {
    const int k = subset_size(u);
    terms.push_back(std::pow(g, -k) * density_norm(d, k, p, tol));
  }
  return combine(terms, q);
}

double frac_norm(const FracFunction& F, const Exponent& p, const Exponent& q, double tol) {
  return combine({std::abs(F.constant), seminorm_V(F, p, q, tol)}, q);
}

}  // namespace qmcwav
