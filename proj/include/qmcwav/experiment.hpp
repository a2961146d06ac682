#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qmcwav/badic.hpp"
#include "qmcwav/haar.hpp"

namespace qmcwav {

enum class Generator { vdc, faure, random };
enum class ExperimentKind { convergence, sharpness };
enum class Method { upper, lower, hilbert, discrepancy };

const char* to_string(Generator g);
const char* to_string(Method m);

struct ExperimentConfig {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::convergence;
  Generator generator = Generator::faure;
  int b = 2;
  int s = 1;
  std::vector<int> m;
  std::vector<double> alpha{1.0};
  Exponent p{2.0};
  Exponent q{2.0};
  std::vector<Method> methods{Method::upper};
  int replicates = 8;   // random generator only; values are RMS over replicates
  int precision = 40;   // digits of random points
  std::uint64_t seed = 0;
  double tol = 1e-7;
  std::optional<int> jmax;
  int panels = 64;      // finest extremal grid for sharpness runs
  bool timing = false;  // seconds column stays 0 unless set, keeping CSV reproducible
  std::string output;

  void validate() const;  // throws ValidationError
};

// Flat "key = value" text; each "[experiment]" line opens a section, '#'
// starts a comment. Errors name the source and line.
std::vector<ExperimentConfig> parse_config(std::istream& in, const std::string& source = "<config>");
std::vector<ExperimentConfig> load_config(const std::string& path);

// b^m uniform points with `precision` base-b digits, reproducible from seed.
PointSet random_point_set(int b, int precision, int s, std::size_t N, std::uint64_t seed);
PointSet generate(const ExperimentConfig& cfg, int m, int replicate = 0);

struct ResultRow {
  int b = 2, s = 1, t = 0, m = 0;
  std::size_t N = 0;
  double alpha = 1.0;
  Exponent p{2.0}, q{2.0};
  Method method = Method::upper;
  double value = 0.0;
  double tail = 0.0;
  double seconds = 0.0;
};

struct RateFit {
  Method method = Method::upper;
  double alpha = 1.0;
  double slope = 0.0;      // least squares of ln value against ln N
  double ratio_min = 0.0;  // of value / (N^-alpha ln(N)^{(s-1)/q'})
  double ratio_max = 0.0;
  int points = 0;
};

// Fit over the rows of one (method, alpha) series, excluding the smallest m.
RateFit fit_rate(const std::vector<ResultRow>& rows, Method method, double alpha, int s, const Exponent& qprime);

struct ConvergenceResult {
  std::vector<ResultRow> rows;
  std::vector<RateFit> fits;
};

ConvergenceResult run_convergence(const ExperimentConfig& cfg);
// Single-point evaluation shared by run_convergence and the CLI.
ResultRow evaluate_method(const PointSet& P, int t, double alpha, const Exponent& p, const Exponent& q,
                          Method method, std::optional<int> jmax, double tol);

void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows, bool header = true);
void write_fits_csv(std::ostream& os, const std::vector<RateFit>& fits, bool header = true);

struct SharpnessRow {
  int b = 2, s = 1, m = 0;
  std::size_t N = 0;
  double alpha = 1.0;
  int panels = 0;
  double discrepancy = 0.0;
  double ratio = 0.0;
};

// Extremal ratios for K = 4, 8, ..., panels at every m.
std::vector<SharpnessRow> run_sharpness(const ExperimentConfig& cfg);
void write_sharpness_csv(std::ostream& os, const std::vector<SharpnessRow>& rows, const Exponent& p,
                         const Exponent& q, bool header = true);

}  // namespace qmcwav
