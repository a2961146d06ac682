#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qmcwav/badic.hpp"
#include "qmcwav/cubature.hpp"
#include "qmcwav/errors.hpp"
#include "qmcwav/experiment.hpp"
#include "qmcwav/fractional.hpp"
#include "qmcwav/nets.hpp"
#include "qmcwav/simd.hpp"
#include "qmcwav/wce.hpp"

using namespace qmcwav;

namespace {

void print(double v) { std::printf("%.17g", v); }

Exponent exponent(const std::string& s) { return Exponent::parse(s); }

int cmd_net_gen(const std::string& kind, int b, int m, int s, const std::string& matrices, const std::string& out) {
  PointSet P(b, m, s);
  if (kind == "vdc") {
    if (s != 1) throw ValidationError("net gen: vdc needs s = 1");
    P = van_der_corput(b, m);
  } else if (kind == "faure") {
    P = faure_net(b, m, s);
  } else if (kind == "matrices") {
    if (matrices.empty()) throw ValidationError("net gen: --matrices FILE required");
    P = digital_net(load_matrices(matrices, b, m, s));
  } else {
    throw ValidationError("net gen: unknown kind '" + kind + "'");
  }
  save_point_set(out, P);
  return 0;
}

int cmd_net_verify(const std::string& in, std::optional<int> t) {
  const PointSet P = load_point_set(in);
  const int m = P.log_size();
  if (m < 0) throw ValidationError("net verify: |P| is not a power of b");
  const int tt = t ? *t : t_value(P);
  const NetCertificate c = verify_net(P, tt);
  std::printf("b=%d m=%d s=%d t=%d verified=%s\n", c.b, c.m, c.s, c.t, c.verified ? "yes" : "no");
  if (c.witness) std::printf("witness %s count=%llu\n", c.witness->to_string().c_str(),
                             static_cast<unsigned long long>(c.witness_count));
  return c.verified ? 0 : 1;
}

int cmd_exactness(const std::string& in, int t) {
  const PointSet P = load_point_set(in);
  const ExactnessReport r = exactness_report(P, t);
  std::printf("L=%d exact=%s max_deviation=%s checked=%llu\n", r.L, r.exact ? "yes" : "no",
              r.max_deviation.to_string().c_str(), static_cast<unsigned long long>(r.indices_checked));
  if (r.witness)
    std::printf("witness %s deviation=%s\n", r.witness->to_string().c_str(), r.witness_deviation.to_string().c_str());
  return 0;
}

int cmd_wce(const std::string& in, double alpha, const std::string& p, const std::string& q, std::optional<int> jmax,
            const std::string& mode) {
  const PointSet P = load_point_set(in);
  const SpaceParams sp{P.base(), P.dim(), alpha, exponent(p), exponent(q)};
  if (mode == "upper") {
    const WceBound w = wce_upper_dual(P, sp, jmax);
    print(w.truncated);
    std::printf(" ");
    print(w.tail);
    std::printf(" ");
    print(w.total);
    std::printf("%s\n", w.generic_tail ? " generic-tail" : "");
  } else if (mode == "lower") {
    print(evaluate_method(P, -1, alpha, sp.p, sp.q, Method::lower, jmax, 1e-7).value);
    std::printf("\n");
  } else if (mode == "hilbert") {
    print(evaluate_method(P, -1, alpha, sp.p, sp.q, Method::hilbert, jmax, 1e-7).value);
    std::printf("\n");
  } else {
    throw ValidationError("wce: unknown mode '" + mode + "'");
  }
  return 0;
}

int cmd_discrepancy(const std::string& in, double alpha, const std::string& pp, const std::string& qq,
                    const std::string& method, double tol, std::uint64_t seed, std::size_t samples,
                    std::size_t node_budget) {
  const PointSet P = load_point_set(in);
  DiscrepancyOptions opt;
  opt.tol = tol;
  opt.seed = seed;
  opt.samples = samples;
  opt.node_budget = node_budget;
  const DiscrepancyResult r = frac_discrepancy(P, alpha, exponent(pp), exponent(qq), parse_disc_method(method), opt);
  print(r.value);
  std::printf(" ");
  print(r.error_estimate);
  std::printf("%s\n", r.converged ? "" : " unconverged");
  return 0;
}

int cmd_sharpness(const std::string& in, double alpha, const std::string& p, const std::string& q, int panels) {
  const PointSet P = load_point_set(in);
  const ExtremalResult e = extremal_function(P, alpha, exponent(p), exponent(q), ExtremalGrid{panels, -1});
  print(e.ratio);
  std::printf(" ");
  print(e.discrepancy);
  std::printf("\n");
  return 0;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write " + path);
  return os;
}

int cmd_run(const std::string& config, const std::string& out, std::optional<std::uint64_t> seed) {
  auto cfgs = load_config(config);
  std::vector<ResultRow> rows;
  std::vector<RateFit> fits;
  std::vector<SharpnessRow> sharp;
  Exponent sp_p{2.0}, sp_q{2.0};
  std::string target = out;
  for (auto& c : cfgs) {
    if (seed) c.seed = *seed;
    if (target.empty()) target = c.output;
    if (c.kind == ExperimentKind::convergence) {
      ConvergenceResult r = run_convergence(c);
      rows.insert(rows.end(), r.rows.begin(), r.rows.end());
      fits.insert(fits.end(), r.fits.begin(), r.fits.end());
    } else {
      const auto r = run_sharpness(c);
      sharp.insert(sharp.end(), r.begin(), r.end());
      sp_p = c.p;
      sp_q = c.q;
    }
  }
  auto emit = [&](std::ostream& os) {
    if (!rows.empty()) write_rows_csv(os, rows);
    if (!sharp.empty()) write_sharpness_csv(os, sharp, sp_p, sp_q);
  };
  if (target.empty()) {
    emit(std::cout);
    if (!fits.empty()) write_fits_csv(std::cerr, fits);
  } else {
    auto os = open_out(target);
    emit(os);
    if (!fits.empty()) {
      auto fs = open_out(target + ".fits.csv");
      write_fits_csv(fs, fits);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qmcwav: nets, Haar wavelet worst-case errors and fractional discrepancies"};
  app.require_subcommand(1);
  std::string simd_name;
  app.add_option("--simd", simd_name, "kernel set: scalar or avx2");

  auto* net = app.add_subcommand("net", "generate or verify (t,m,s)-nets");
  net->require_subcommand(1);
  auto* gen = net->add_subcommand("gen", "write a point set");
  std::string kind = "faure", matrices, out;
  int b = 2, m = 0, s = 1;
  gen->add_option("--kind", kind)->check(CLI::IsMember({"vdc", "faure", "matrices"}));
  gen->add_option("--b", b)->required();
  gen->add_option("--m", m)->required();
  gen->add_option("--s", s);
  gen->add_option("--matrices", matrices);
  gen->add_option("--out", out)->required();
  auto* verify = net->add_subcommand("verify", "print the net certificate");
  std::string in;
  std::optional<int> t;
  verify->add_option("--in", in)->required();
  verify->add_option("--t", t);

  auto* exact = app.add_subcommand("exactness", "check exact integration of low-level wavelets");
  int t_exact = 0;
  exact->add_option("--in", in)->required();
  exact->add_option("--t", t_exact)->required();

  auto* wce = app.add_subcommand("wce", "worst-case error on the Haar wavelet space");
  double alpha = 1.0;
  std::string p = "2", q = "2", mode = "upper";
  std::optional<int> jmax;
  wce->add_option("--in", in)->required();
  wce->add_option("--alpha", alpha)->required();
  wce->add_option("--p", p);
  wce->add_option("--q", q);
  wce->add_option("--jmax", jmax);
  wce->add_option("--mode", mode)->check(CLI::IsMember({"upper", "lower", "hilbert"}));

  auto* disc = app.add_subcommand("discrepancy", "fractional discrepancy D*");
  std::string pprime = "2", qprime = "2", method = "warnock";
  double tol = 1e-7;
  std::uint64_t seed_value = 0;
  std::size_t samples = std::size_t{1} << 20;
  std::size_t node_budget = std::size_t{1} << 26;
  disc->add_option("--in", in)->required();
  disc->add_option("--alpha", alpha)->required();
  disc->add_option("--pprime", pprime);
  disc->add_option("--qprime", qprime);
  disc->add_option("--method", method)->check(CLI::IsMember({"warnock", "quad", "mc"}));
  disc->add_option("--tol", tol);
  disc->add_option("--seed", seed_value);
  disc->add_option("--samples", samples);
  disc->add_option("--node-budget", node_budget, "tensor-quad points per subset");

  auto* sharp = app.add_subcommand("sharpness", "extremal function ratio");
  int panels = 64;
  sharp->add_option("--in", in)->required();
  sharp->add_option("--alpha", alpha)->required();
  sharp->add_option("--p", p);
  sharp->add_option("--q", q);
  sharp->add_option("--panels", panels);

  auto* run = app.add_subcommand("run", "run experiments from a config file");
  std::string config;
  std::optional<std::uint64_t> run_seed;
  run->add_option("--config", config)->required();
  run->add_option("--out", out);
  run->add_option("--seed", run_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (!simd_name.empty()) simd::select(simd_name);
    if (*gen) return cmd_net_gen(kind, b, m, s, matrices, out);
    if (*verify) return cmd_net_verify(in, t);
    if (*exact) return cmd_exactness(in, t_exact);
    if (*wce) return cmd_wce(in, alpha, p, q, jmax, mode);
    if (*disc) return cmd_discrepancy(in, alpha, pprime, qprime, method, tol, seed_value, samples, node_budget);
    if (*sharp) return cmd_sharpness(in, alpha, p, q, panels);
    if (*run) return cmd_run(config, out, run_seed);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const BudgetExceeded& e) {
    std::fprintf(stderr, "budget exceeded: %s\n", e.what());
    return 3;
  }
  return 0;
}
