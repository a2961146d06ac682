#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "qmcwav/badic.hpp"
#include "qmcwav/haar.hpp"

namespace qmcwav {

// Subsets u of {0..s-1} are bit masks; bit l set means coordinate l is in u.
using Subset = std::uint32_t;
int subset_size(Subset u);

// (1/Gamma(alpha)) int_0^x ftilde(t) (x-t)^(alpha-1) dt by Gauss-Jacobi with
// the kernel as weight; node count doubles from 64 until successive results
// differ by less than tol (at most 2048 nodes).
double frac_integral(const std::function<double(double)>& ftilde, double alpha, double x, double tol = 1e-12);

// Anchored Riemann-Liouville derivative of f - f(0) at x by a central
// difference of step h applied to the order 1-alpha integral. Requires
// alpha in (0,1) and h < x <= 1 - h.
double rl_derivative(const std::function<double(double)>& f, double alpha, double x, double h = 1e-3);
// Same without subtracting f(0).
double rl_derivative_unanchored(const std::function<double(double)>& f, double alpha, double x,
                                double h = 1e-3);

// Density on [0,1]^u; receives the coordinates in u in increasing order.
using Density = std::function<double(std::span<const double>)>;

// f = Phi((ftilde_u)_u). Subsets without a density contribute nothing.
struct FracFunction {
  double alpha = 1.0;
  int s = 1;
  double constant = 0.0;  // ftilde for the empty set
  std::map<Subset, Density> densities;

  FracFunction() = default;
  FracFunction(double alpha, int s);
  void set_density(Subset u, Density d);
  bool has_density(Subset u) const { return densities.count(u) != 0; }
};

// u-summand of Phi at x (length s): Gamma(alpha)^{-|u|} times the tensor
// Gauss-Jacobi integral of ftilde_u against prod (x_j - t_j)_+^{alpha-1}.
double phi_term(const FracFunction& F, Subset u, std::span<const double> x, double tol = 1e-10);
double phi_synthesize(const FracFunction& F, std::span<const double> x, double tol = 1e-10);

// sum over v in u of (-1)^{|u \ v|} f(x_v, 0).
double anchored_term(const std::function<double(std::span<const double>)>& f, int s, Subset u,
                     std::span<const double> x);

// A = int_0^1 (alpha^-1 (1-t)^alpha)^2 dt, B(x) = alpha^-1 int_0^x (1-t)^alpha (x-t)^{alpha-1} dt,
// C(x,y) = int_0^min(x,y) (x-t)^{alpha-1} (y-t)^{alpha-1} dt (alpha > 1/2).
double kernel_A(double alpha);
double kernel_B(double alpha, double x);
double kernel_C(double alpha, double x, double y);
double kernel_K(double alpha, double x, double y);
double kernel_Ks(double alpha, std::span<const double> x, std::span<const double> y);

// Kernel values with a second estimate from a half-order rule; |value - coarse|
// bounds the quadrature error.
struct KernelValue {
  double value;
  double coarse;
};
KernelValue kernel_B_est(double alpha, double x);
KernelValue kernel_C_est(double alpha, double x, double y);

struct SingularValue {
  double value = 0.0;
  bool singular = false;  // some t_j equals a point coordinate with alpha < 1
};

// t_u lists the coordinates in u in increasing order. u must be nonempty.
SingularValue delta_alpha(std::span<const double> t_u, Subset u, const PointSet& P, double alpha);

// Nested L_p / l_q aggregation of the density norms over nonempty u, each
// scaled by Gamma(alpha)^{-|u|}. frac_norm adds |ftilde_empty|.
double seminorm_V(const FracFunction& F, const Exponent& p, const Exponent& q, double tol = 1e-10);
double frac_norm(const FracFunction& F, const Exponent& p, const Exponent& q, double tol = 1e-10);

enum class DiscMethod { warnock, tensor_quad, monte_carlo };
const char* to_string(DiscMethod m);
DiscMethod parse_disc_method(const std::string& text);  // warnock | quad | mc

struct DiscrepancyOptions {
  double tol = 1e-7;                       // relative, tensor-quad refinement
  std::uint64_t seed = 0;                  // monte-carlo
  std::size_t samples = std::size_t{1} << 20;  // monte-carlo draws per subset
  std::size_t node_budget = std::size_t{1} << 26;  // tensor-quad points per subset
};

struct DiscrepancyResult {
  double value = 0.0;
  double error_estimate = 0.0;
  DiscMethod method = DiscMethod::warnock;
  bool converged = true;
  // int |Delta_alpha(., u, P)|^{p'} for each nonempty u (tensor-quad and
  // monte-carlo only).
  std::vector<std::pair<Subset, double>> per_u;
};

// Requires alpha = 1, or alpha in (0,1) with p'(1 - alpha) < 1. Warnock needs
// p' = q' = 2 and alpha > 1/2; tensor-quad needs s <= 3.
DiscrepancyResult frac_discrepancy(const PointSet& P, double alpha, const Exponent& pprime, const Exponent& qprime,
                                   DiscMethod method, const DiscrepancyOptions& opt = {});

// Classical L2 star discrepancy of points given row-wise, by Warnock's formula.
double l2_star_discrepancy(const std::vector<std::vector<double>>& points);

// Worst-case error of Q_P on the reproducing kernel Hilbert space of K_{alpha,s}
// from the kernel alone: the kernel mean and its integral are obtained by
// numerical quadrature of kernel_K, not from the closed forms A and B.
double rkhs_worst_case_error(const PointSet& P, double alpha);

// Breakpoints per coordinate: {i/K} plus each point coordinate x and
// x - 2^-g for g = 1..G. G < 0 selects 3 log2(K).
struct ExtremalGrid {
  int K = 64;
  int G = -1;
};

struct ExtremalResult {
  FracFunction f;
  double integral = 0.0;      // I_s(f)
  double cubature = 0.0;      // Q_P(f)
  double discrepancy = 0.0;   // D*_{alpha,s,p',q'}(P)
  double norm = 0.0;          // ||f||_{alpha,s,p,q}
  double ratio = 0.0;         // |I - Q| / (D* ||f||)
  std::size_t cells = 0;
};

// Piecewise constant densities aligned with Delta_alpha on the grid cells.
// Requires p in (1/alpha, inf) and s <= 3.
ExtremalResult extremal_function(const PointSet& P, double alpha, const Exponent& p, const Exponent& q,
                                 const ExtremalGrid& grid = {});

}  // namespace qmcwav
