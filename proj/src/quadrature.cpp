#include "qmcwav/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "qmcwav/errors.hpp"

namespace qmcwav {

namespace {

// P_n^{(a,b)}(x) and its derivative by the three-term recurrence.
void jacobi_eval(int n, double a, double b, double x, double& p, double& dp) {
  auto value = [](int n, double a, double b, double x) {
    if (n == 0) return 1.0;
    double p0 = 1.0;
    double p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for (int k = 2; k <= n; ++k) {
      const double s = 2.0 * k + a + b;
      const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
      const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
      const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
      const double p2 = (c2 * p1 - c3 * p0) / c1;
      p0 = p1;
      p1 = p2;
    }
    return p1;
  };
  p = value(n, a, b, x);
  dp = n == 0 ? 0.0 : 0.5 * (n + a + b + 1.0) * value(n - 1, a + 1.0, b + 1.0, x);
}

QuadRule build_jacobi(int n, double a, double b) {
  if (n < 1) throw ValidationError("gauss_jacobi: need n >= 1");
  if (!(a > -1.0 && b > -1.0)) throw ValidationError("gauss_jacobi: exponents must exceed -1");
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    diag(k) = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    double beta;
    if (k == 1)
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
    else
      beta = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    sub(k - 1) = std::sqrt(beta);
  }
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = diag(0);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
    for (int k = 0; k < n; ++k) rule.nodes[k] = es.eigenvalues()(k);
  }
  const double log_const = (a + b + 1.0) * std::log(2.0) + std::lgamma(n + a + 1.0) + std::lgamma(n + b + 1.0) -
                           std::lgamma(n + a + b + 1.0) - std::lgamma(n + 1.0);
  for (int k = 0; k < n; ++k) {
    double x = rule.nodes[k], p, dp;
    for (int it = 0; it < 3; ++it) {
      jacobi_eval(n, a, b, x, p, dp);
      const double step = p / dp;
      if (!std::isfinite(step)) break;
      x -= step;
    }
    x = std::min(std::max(x, -1.0), 1.0);
    rule.nodes[k] = x;
    jacobi_eval(n, a, b, x, p, dp);
    rule.weights[k] = std::exp(log_const - std::log1p(-x) - std::log1p(x) - 2.0 * std::log(std::abs(dp)));
  }
  return rule;
}

}  // namespace

const QuadRule& gauss_jacobi(int n, double a, double b) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<QuadRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, a, b}];
  if (!slot) slot = std::make_unique<QuadRule>(build_jacobi(n, a, b));
  return *slot;
}

const QuadRule& gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

void map_jacobi(int n, double a, double b, double lo, double hi, std::vector<double>& t, std::vector<double>& w) {
  const QuadRule& r = gauss_jacobi(n, a, b);
  const double half = 0.5 * (hi - lo);
  const double scale = std::pow(half, a + b + 1.0);
  t.resize(n);
  w.resize(n);
  for (int k = 0; k < n; ++k) {
    t[k] = lo + half * (r.nodes[k] + 1.0);
    w[k] = scale * r.weights[k];
  }
}

}  // namespace qmcwav
