#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qmcwav/badic.hpp"
#include "qmcwav/exact.hpp"

namespace qmcwav {

// Exponent in [1, inf]. Infinity is a state, not a sentinel value.
class Exponent {
 public:
  explicit Exponent(double v);
  static Exponent infinity();
  static Exponent parse(const std::string& text);  // "inf" or a number >= 1

  bool is_infinite() const { return inf_; }
  double value() const;        // throws if infinite
  double reciprocal() const;   // 1/p, with 1/inf = 0
  Exponent conjugate() const;  // 1/p + 1/p' = 1
  std::string to_string() const;

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
  }

 private:
  Exponent() = default;
  double v_ = 1.0;
  bool inf_ = false;
};

struct SpaceParams {
  int b = 2;
  int s = 1;
  double alpha = 1.0;
  Exponent p{2.0};
  Exponent q{2.0};

  Exponent p_dual() const { return p.conjugate(); }
  Exponent q_dual() const { return q.conjugate(); }
  // Point evaluation is bounded: alpha >= 1/p if q = 1, alpha > 1/p otherwise.
  bool eval_ok() const;
  void validate() const;
};

// Index (j,k,i) of Psi^j_{i,k}; k_l = 0 when j_l <= 1, i_l = 0 when j_l = 0.
struct WaveletIndex {
  std::vector<int> j;
  std::vector<std::uint64_t> k;
  std::vector<int> i;

  static WaveletIndex zero(int s);
  int dim() const { return static_cast<int>(j.size()); }
  int level() const;          // |j|
  int active() const;         // number of l with j_l > 0
  void validate(int b) const; // throws ValidationError
  std::string to_string() const;
};

// Level-major order: |j|, then j, k, i lexicographically.
struct IndexOrder {
  bool operator()(const WaveletIndex& a, const WaveletIndex& b) const;
};

class CoeffMap {
 public:
  CoeffMap(int b, int s) : b_(b), s_(s) {}
  int base() const { return b_; }
  int dim() const { return s_; }

  void set(const WaveletIndex& idx, double value);
  double get(const WaveletIndex& idx) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<WaveletIndex, double, IndexOrder>& entries() const { return entries_; }

  // Sum over i_l in each nonzero direction vanishes within tol.
  bool satisfies_zero_sum(double tol) const;

 private:
  int b_;
  int s_;
  std::map<WaveletIndex, double, IndexOrder> entries_;
};

// Cell values on the level-m grid in every coordinate, row-major with
// coordinate 0 most significant.
template <class T>
class PiecewiseConstant {
 public:
  PiecewiseConstant(int b, int m, int s);
  PiecewiseConstant(int b, int m, int s, std::vector<T> values);

  int base() const { return b_; }
  int level() const { return m_; }
  int dim() const { return s_; }
  std::uint64_t side() const { return side_; }
  std::size_t cells() const { return values_.size(); }

  T& operator[](std::size_t c) { return values_[c]; }
  const T& operator[](std::size_t c) const { return values_[c]; }
  const std::vector<T>& values() const { return values_; }
  std::vector<T>& values() { return values_; }

  std::size_t cell_of(const BadicPoint& p) const;
  T at(const BadicPoint& p) const { return values_[cell_of(p)]; }

 private:
  int b_;
  int m_;
  int s_;
  std::uint64_t side_;
  std::vector<T> values_;
};

using PiecewiseConstantD = PiecewiseConstant<double>;
using PiecewiseConstantQ = PiecewiseConstant<mpq_class>;

double psi_eval(int b, int j, int i, std::uint64_t k, double x);
// Exact value at coordinate l of a b-adic point.
RootScaled psi_eval_exact(int b, int j, int i, std::uint64_t k, const BadicPoint& p, int l);
double Psi_eval(int b, const WaveletIndex& idx, std::span<const double> x);
RootScaled Psi_eval_exact(const WaveletIndex& idx, const BadicPoint& p);

// <f, Psi>; requires f.level() >= max j_l.
RootScaled inner_product_pc(const PiecewiseConstantQ& f, const WaveletIndex& idx);
double inner_product_pc(const PiecewiseConstantD& f, const WaveletIndex& idx);

// <f, Psi> by tensor Gauss-Legendre on each constancy cell of Psi, doubling
// the node count until successive values differ by less than tol.
double coeff_smooth(const std::function<double(std::span<const double>)>& f, int b,
                    const WaveletIndex& idx, double tol, int max_nodes = 256);

// Block sums of |c|^p (max |c| when p = inf) keyed by the level vector j.
using LevelBlocks = std::map<std::vector<int>, double>;
double combine_level_blocks(const LevelBlocks& blocks, const SpaceParams& sp);

double haar_norm(const CoeffMap& c, const SpaceParams& sp);

// All coefficients of a level-m piecewise constant, by a separable transform.
// fn(j, coeffs) receives a dense block for every j in [0,m]^s; entry c of
// the block has c_l = b k_l + i_l for j_l >= 1 and c_l = 0 for j_l = 0,
// laid out row-major with coordinate 0 most significant.
void for_each_coefficient_block(
    const PiecewiseConstantD& f,
    const std::function<void(const std::vector<int>& j, std::span<const double> coeffs)>& fn);
CoeffMap analyze(const PiecewiseConstantD& f);
double haar_norm(const PiecewiseConstantD& f, const SpaceParams& sp);

double series_eval(const CoeffMap& c, std::span<const double> x);

// C_{b,alpha,p,q} = b^{1/p'} (1 - b^{-q'(alpha - 1/p)})^{-1/q'}.
double evaluation_constant(int b, double alpha, const Exponent& p, const Exponent& q);

struct FrameReport {
  bool exact = true;               // all deviations exactly zero
  double max_deviation = 0.0;
  std::uint64_t sum_checks = 0;    // grid points checked for the zero-sum identity
  std::uint64_t gram_checks = 0;   // Gram entries checked
  std::string first_failure;
};

// Zero-sum identity at all level-`precision` grid points and the Gram
// entries <psi^j_{i,k}, psi^{j'}_{i',k'}> for all i, i' and all j' <= precision,
// by exact piecewise integration.
FrameReport frame_check(int b, int j, std::uint64_t k, int precision);

void write_coeff_map(std::ostream& os, const CoeffMap& c);
CoeffMap read_coeff_map(std::istream& is, int b, int s);

// Binary: int32 b, m, s (little-endian) then b^{ms} doubles.
void write_piecewise_constant(std::ostream& os, const PiecewiseConstantD& f);
PiecewiseConstantD read_piecewise_constant(std::istream& is);

}  // namespace qmcwav
