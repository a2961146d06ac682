#include "qmcwav/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "qmcwav/errors.hpp"
#include "qmcwav/fractional.hpp"
#include "qmcwav/nets.hpp"
#include "qmcwav/random.hpp"
#include "qmcwav/wce.hpp"

namespace qmcwav {

const char* to_string(Generator g) {
  switch (g) {
    case Generator::vdc: return "vdc";
    case Generator::faure: return "faure";
    case Generator::random: return "random";
  }
  return "?";
}

const char* to_string(Method m) {
  switch (m) {
    case Method::upper: return "upper";
    case Method::lower: return "lower";
    case Method::hilbert: return "hilbert";
    case Method::discrepancy: return "discrepancy";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  const std::string where = "experiment '" + name + "': ";
  if (m.empty()) throw ValidationError(where + "empty m range");
  for (int v : m)
    if (v < 0) throw ValidationError(where + "negative m");
  if (alpha.empty()) throw ValidationError(where + "empty alpha list");
  if (methods.empty() && kind == ExperimentKind::convergence) throw ValidationError(where + "no methods");
  if (b < 2 || b > 36) throw ValidationError(where + "need 2 <= b <= 36");
  if (s < 1) throw ValidationError(where + "need s >= 1");
  if (generator == Generator::vdc && s != 1) throw ValidationError(where + "vdc generator needs s = 1");
  if (generator == Generator::faure && (!is_prime(b) || s > b))
    throw ValidationError(where + "faure generator needs prime b >= s");
  if (generator == Generator::random) {
    if (replicates < 1) throw ValidationError(where + "need replicates >= 1");
    if (precision < 1 || !ipow_fits(static_cast<std::uint64_t>(b), precision))
      throw ValidationError(where + "precision out of range");
  }
  if (panels < 1) throw ValidationError(where + "need panels >= 1");
  if (!(tol > 0.0)) throw ValidationError(where + "tol must be positive");
  for (double a : alpha) {
    if (!(a > 0.0 && a <= 1.0)) throw ValidationError(where + "alpha must lie in (0,1]");
    SpaceParams sp{b, s, a, p, q};
    if (kind == ExperimentKind::sharpness) {
      if (p.is_infinite() || !(p.value() * a > 1.0)) throw ValidationError(where + "sharpness needs alpha > 1/p");
      continue;
    }
    for (Method me : methods) {
      if ((me == Method::upper || me == Method::lower) && !sp.eval_ok())
        throw ValidationError(where + "alpha too small for point evaluation at this p, q");
      if (me == Method::hilbert && !(p == Exponent(2.0) && q == Exponent(2.0) && a > 0.5))
        throw ValidationError(where + "hilbert needs p = q = 2 and alpha > 1/2");
      if (me == Method::discrepancy) {
        const Exponent pp = p.conjugate();
        if (pp.is_infinite() || (a < 1.0 && !(pp.value() * (1.0 - a) < 1.0)))
          throw ValidationError(where + "discrepancy needs p'(1 - alpha) < 1");
      }
    }
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int to_int(const std::string& v) {
  std::size_t pos = 0;
  const int r = std::stoi(v, &pos);
  if (pos != v.size()) throw std::invalid_argument(v);
  return r;
}

double to_double(const std::string& v) {
  std::size_t pos = 0;
  const double r = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument(v);
  return r;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw std::invalid_argument(v);
}

std::vector<int> parse_range(const std::string& v) {
  std::vector<int> out;
  const auto dots = v.find("..");
  if (dots != std::string::npos) {
    const int lo = to_int(trim(v.substr(0, dots))), hi = to_int(trim(v.substr(dots + 2)));
    for (int k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  }
  for (const auto& item : split_list(v)) out.push_back(to_int(item));
  return out;
}

void apply_key(ExperimentConfig& c, const std::string& key, const std::string& v) {
  if (key == "name") {
    c.name = v;
  } else if (key == "kind") {
    if (v == "convergence") c.kind = ExperimentKind::convergence;
    else if (v == "sharpness") c.kind = ExperimentKind::sharpness;
    else throw std::invalid_argument(v);
  } else if (key == "generator") {
    if (v == "vdc") c.generator = Generator::vdc;
    else if (v == "faure") c.generator = Generator::faure;
    else if (v == "random") c.generator = Generator::random;
    else throw std::invalid_argument(v);
  } else if (key == "b") {
    c.b = to_int(v);
  } else if (key == "s") {
    c.s = to_int(v);
  } else if (key == "m") {
    c.m = parse_range(v);
  } else if (key == "alpha") {
    c.alpha.clear();
    for (const auto& item : split_list(v)) c.alpha.push_back(to_double(item));
  } else if (key == "p") {
    c.p = Exponent::parse(v);
  } else if (key == "q") {
    c.q = Exponent::parse(v);
  } else if (key == "methods") {
    c.methods.clear();
    for (const auto& item : split_list(v)) {
      if (item == "upper") c.methods.push_back(Method::upper);
      else if (item == "lower") c.methods.push_back(Method::lower);
      else if (item == "hilbert") c.methods.push_back(Method::hilbert);
      else if (item == "discrepancy") c.methods.push_back(Method::discrepancy);
      else throw std::invalid_argument(item);
    }
  } else if (key == "replicates") {
    c.replicates = to_int(v);
  } else if (key == "precision") {
    c.precision = to_int(v);
  } else if (key == "seed") {
    c.seed = std::stoull(v);
  } else if (key == "tol") {
    c.tol = to_double(v);
  } else if (key == "jmax") {
    c.jmax = to_int(v);
  } else if (key == "panels") {
    c.panels = to_int(v);
  } else if (key == "timing") {
    c.timing = to_bool(v);
  } else if (key == "output") {
    c.output = v;
  } else {
    throw ValidationError("unknown key '" + key + "'");
  }
}

}  // namespace

std::vector<ExperimentConfig> parse_config(std::istream& in, const std::string& source) {
  std::vector<ExperimentConfig> out;
  std::vector<int> start_line;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (line == "[experiment]") {
      out.emplace_back();
      start_line.push_back(lineno);
      continue;
    }
    if (line.front() == '[') throw ValidationError(where + "unknown section " + line);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(where + "expected key = value");
    if (out.empty()) throw ValidationError(where + "key outside an [experiment] section");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    try {
      apply_key(out.back(), key, value);
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    } catch (const std::exception&) {
      throw ValidationError(where + "bad value '" + value + "' for " + key);
    }
  }
  if (out.empty()) throw ValidationError(source + ": no [experiment] section");
  for (std::size_t k = 0; k < out.size(); ++k) {
    try {
      out[k].validate();
    } catch (const ValidationError& e) {
      throw ValidationError(source + ":" + std::to_string(start_line[k]) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ExperimentConfig> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path);
  return parse_config(in, path);
}

PointSet random_point_set(int b, int precision, int s, std::size_t N, std::uint64_t seed) {
  const auto scale = ipow(static_cast<std::uint64_t>(b), precision);
  PointSet P(b, precision, s);
  std::vector<std::uint64_t> num(s);
  CounterRng rng(seed);
  for (std::size_t n = 0; n < N; ++n) {
    for (int l = 0; l < s; ++l)
      num[l] = std::min(scale - 1, static_cast<std::uint64_t>(rng.uniform() * static_cast<double>(scale)));
    P.push_back(num);
  }
  return P;
}

PointSet generate(const ExperimentConfig& cfg, int m, int replicate) {
  switch (cfg.generator) {
    case Generator::vdc: return van_der_corput(cfg.b, m);
    case Generator::faure: return faure_net(cfg.b, m, cfg.s);
    case Generator::random:
      return random_point_set(cfg.b, cfg.precision, cfg.s, ipow(static_cast<std::uint64_t>(cfg.b), m),
                              counter_hash(cfg.seed, (static_cast<std::uint64_t>(m) << 32) |
                                                         static_cast<std::uint64_t>(replicate)));
  }
  throw ValidationError("unknown generator");
}

ResultRow evaluate_method(const PointSet& P, int t, double alpha, const Exponent& p, const Exponent& q,
                          Method method, std::optional<int> jmax, double tol) {
  ResultRow r;
  r.b = P.base();
  r.s = P.dim();
  r.t = t;
  r.m = std::max(P.log_size(), 0);
  r.N = P.size();
  r.alpha = alpha;
  r.p = p;
  r.q = q;
  r.method = method;
  const SpaceParams sp{P.base(), P.dim(), alpha, p, q};
  switch (method) {
    case Method::upper: {
      const WceBound w = wce_upper_dual(P, sp, jmax, t >= 0 ? std::optional<int>(t) : std::nullopt);
      r.value = w.total;
      r.tail = w.tail;
      break;
    }
    case Method::lower: {
      const int mm = mock_level(P.size(), P.base());
      const bool enumerable = ipow_fits(static_cast<std::uint64_t>(P.base()), mm * P.dim()) &&
                              ipow(static_cast<std::uint64_t>(P.base()), mm * P.dim()) <= (std::uint64_t{1} << 24);
      r.value = mock_lower_bound(P, sp, enumerable ? NormMode::exact : NormMode::analytic).value;
      break;
    }
    case Method::hilbert:
      r.value = wce_exact_hilbert(P, alpha);
      break;
    case Method::discrepancy: {
      const Exponent pp = p.conjugate(), qq = q.conjugate();
      const bool w = pp == Exponent(2.0) && qq == Exponent(2.0) && alpha > 0.5;
      DiscrepancyOptions opt;
      opt.tol = tol;
      const DiscrepancyResult d =
          frac_discrepancy(P, alpha, pp, qq, w ? DiscMethod::warnock : DiscMethod::tensor_quad, opt);
      r.value = d.value;
      r.tail = d.error_estimate;
      break;
    }
  }
  return r;
}

RateFit fit_rate(const std::vector<ResultRow>& rows, Method method, double alpha, int s, const Exponent& qprime) {
  std::vector<const ResultRow*> sel;
  for (const auto& r : rows)
    if (r.method == method && r.alpha == alpha) sel.push_back(&r);
  std::sort(sel.begin(), sel.end(), [](const ResultRow* a, const ResultRow* b) { return a->m < b->m; });
  if (!sel.empty()) sel.erase(sel.begin());
  RateFit f;
  f.method = method;
  f.alpha = alpha;
  f.points = static_cast<int>(sel.size());
  if (sel.size() < 4) throw ValidationError("fit_rate: need at least 4 points after dropping the smallest m");
  const double lexp = qprime.is_infinite() ? 0.0 : (s - 1) / qprime.value();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  f.ratio_min = INFINITY;
  f.ratio_max = 0.0;
  for (const ResultRow* r : sel) {
    const double lnN = std::log(static_cast<double>(r->N));
    const double y = std::log(r->value);
    sx += lnN;
    sy += y;
    sxx += lnN * lnN;
    sxy += lnN * y;
    const double ratio = r->value / (std::pow(static_cast<double>(r->N), -alpha) * std::pow(lnN, lexp));
    f.ratio_min = std::min(f.ratio_min, ratio);
    f.ratio_max = std::max(f.ratio_max, ratio);
  }
  const double n = static_cast<double>(sel.size());
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return f;
}

ConvergenceResult run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  ConvergenceResult res;
  const int reps = cfg.generator == Generator::random ? cfg.replicates : 1;
  for (int m : cfg.m) {
    std::vector<PointSet> sets;
    for (int r = 0; r < reps; ++r) sets.push_back(generate(cfg, m, r));
    // Random sets are not certified nets; upper bounds measure their t-value.
    const int t = cfg.generator == Generator::random ? -1 : 0;
    for (double a : cfg.alpha) {
      for (Method me : cfg.methods) {
        const auto start = std::chrono::steady_clock::now();
        ResultRow row;
        double sq = 0.0, sq_tail = 0.0;
        for (int r = 0; r < reps; ++r) {
          row = evaluate_method(sets[r], t, a, cfg.p, cfg.q, me, cfg.jmax, cfg.tol);
          sq += row.value * row.value;
          sq_tail += row.tail * row.tail;
        }
        if (reps > 1) {
          row.value = std::sqrt(sq / reps);
          row.tail = std::sqrt(sq_tail / reps);
        }
        row.t = t;
        row.m = m;
        if (cfg.timing)
          row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        res.rows.push_back(row);
      }
    }
  }
  if (cfg.m.size() >= 5)
    for (double a : cfg.alpha)
      for (Method me : cfg.methods) res.fits.push_back(fit_rate(res.rows, me, a, cfg.s, cfg.q.conjugate()));
  return res;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows, bool header) {
  if (header) os << "b,s,t,m,N,alpha,p,q,method,value,tail,seconds\n";
  for (const auto& r : rows)
    os << r.b << ',' << r.s << ',' << r.t << ',' << r.m << ',' << r.N << ',' << num(r.alpha) << ','
       << r.p.to_string() << ',' << r.q.to_string() << ',' << to_string(r.method) << ',' << num(r.value) << ','
       << num(r.tail) << ',' << num(r.seconds) << '\n';
}

void write_fits_csv(std::ostream& os, const std::vector<RateFit>& fits, bool header) {
  if (header) os << "method,alpha,slope,ratio_min,ratio_max,points\n";
  for (const auto& f : fits)
    os << to_string(f.method) << ',' << num(f.alpha) << ',' << num(f.slope) << ',' << num(f.ratio_min) << ','
       << num(f.ratio_max) << ',' << f.points << '\n';
}

std::vector<SharpnessRow> run_sharpness(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<SharpnessRow> rows;
  for (int m : cfg.m) {
    const PointSet P = generate(cfg, m, 0);
    for (double a : cfg.alpha) {
      std::vector<int> ks;
      for (int K = 4; K < cfg.panels; K *= 2) ks.push_back(K);
      ks.push_back(cfg.panels);
      for (int K : ks) {
        const ExtremalResult e = extremal_function(P, a, cfg.p, cfg.q, ExtremalGrid{K, -1});
        rows.push_back({cfg.b, cfg.s, m, P.size(), a, K, e.discrepancy, e.ratio});
      }
    }
  }
  return rows;
}

void write_sharpness_csv(std::ostream& os, const std::vector<SharpnessRow>& rows, const Exponent& p,
                         const Exponent& q, bool header) {
  if (header) os << "b,s,m,N,alpha,p,q,panels,discrepancy,ratio\n";
  for (const auto& r : rows)
    os << r.b << ',' << r.s << ',' << r.m << ',' << r.N << ',' << num(r.alpha) << ',' << p.to_string() << ','
       << q.to_string() << ',' << r.panels << ',' << num(r.discrepancy) << ',' << num(r.ratio) << '\n';
}

}  // namespace qmcwav
