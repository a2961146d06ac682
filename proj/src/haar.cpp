#include "qmcwav/haar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "qmcwav/errors.hpp"
#include "qmcwav/quadrature.hpp"

namespace qmcwav {

// ---------------------------------------------------------------- Exponent

Exponent::Exponent(double v) : v_(v), inf_(false) {
  if (std::isinf(v) && v > 0) {
    inf_ = true;
    v_ = 0.0;
  } else if (!(v >= 1.0)) {
    throw ValidationError("exponent must lie in [1, inf]");
  }
}

Exponent Exponent::infinity() {
  Exponent e;
  e.inf_ = true;
  e.v_ = 0.0;
  return e;
}

Exponent Exponent::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ValidationError("invalid exponent '" + text + "'");
  }
  if (used != text.size()) throw ValidationError("invalid exponent '" + text + "'");
  return Exponent(v);
}

double Exponent::value() const {
  if (inf_) throw ValidationError("exponent is infinite");
  return v_;
}

double Exponent::reciprocal() const { return inf_ ? 0.0 : 1.0 / v_; }

Exponent Exponent::conjugate() const {
  if (inf_) return Exponent(1.0);
  if (v_ == 1.0) return infinity();
  return Exponent(v_ / (v_ - 1.0));
}

std::string Exponent::to_string() const {
  if (inf_) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v_);
  return buf;
}

bool SpaceParams::eval_ok() const {
  const double ip = p.reciprocal();
  if (!q.is_infinite() && q.value() == 1.0) return alpha >= ip;
  return alpha > ip;
}

void SpaceParams::validate() const {
  if (b < 2) throw ValidationError("b must be >= 2");
  if (s < 1) throw ValidationError("s must be >= 1");
  if (!std::isfinite(alpha) || alpha <= 0) throw ValidationError("alpha must be positive");
}

// ---------------------------------------------------------------- indices

WaveletIndex WaveletIndex::zero(int s) {
  return WaveletIndex{std::vector<int>(s, 0), std::vector<std::uint64_t>(s, 0), std::vector<int>(s, 0)};
}

int WaveletIndex::level() const {
  int t = 0;
  for (int v : j) t += v;
  return t;
}

int WaveletIndex::active() const {
  int t = 0;
  for (int v : j) t += v > 0;
  return t;
}

void WaveletIndex::validate(int b) const {
  if (k.size() != j.size() || i.size() != j.size() || j.empty())
    throw ValidationError("wavelet index: j, k, i must have equal nonzero length");
  for (std::size_t l = 0; l < j.size(); ++l) {
    if (j[l] < 0) throw ValidationError("wavelet index: negative level");
    const std::uint64_t kmax = j[l] <= 1 ? 1 : ipow(static_cast<std::uint64_t>(b), j[l] - 1);
    if (k[l] >= kmax) throw ValidationError("wavelet index: k out of range " + to_string());
    if (j[l] == 0 ? i[l] != 0 : (i[l] < 0 || i[l] >= b))
      throw ValidationError("wavelet index: i out of range " + to_string());
  }
}

std::string WaveletIndex::to_string() const {
  std::ostringstream os;
  auto list = [&os](const auto& v) {
    os << '(';
    for (std::size_t l = 0; l < v.size(); ++l) os << (l ? "," : "") << v[l];
    os << ')';
  };
  os << "j=";
  list(j);
  os << " k=";
  list(k);
  os << " i=";
  list(i);
  return os.str();
}

bool IndexOrder::operator()(const WaveletIndex& a, const WaveletIndex& b) const {
  const int la = a.level(), lb = b.level();
  if (la != lb) return la < lb;
  if (a.j != b.j) return a.j < b.j;
  if (a.k != b.k) return a.k < b.k;
  return a.i < b.i;
}

void CoeffMap::set(const WaveletIndex& idx, double value) {
  if (idx.dim() != s_) throw ValidationError("CoeffMap: dimension mismatch");
  idx.validate(b_);
  entries_[idx] = value;
}

double CoeffMap::get(const WaveletIndex& idx) const {
  auto it = entries_.find(idx);
  return it == entries_.end() ? 0.0 : it->second;
}

bool CoeffMap::satisfies_zero_sum(double tol) const {
  // Group by (j, k, i with direction l removed).
  for (int l = 0; l < s_; ++l) {
    std::map<WaveletIndex, double, IndexOrder> sums;
    for (const auto& [idx, v] : entries_) {
      if (idx.j[l] == 0) continue;
      WaveletIndex key = idx;
      key.i[l] = 0;
      sums[key] += v;
    }
    for (const auto& [key, v] : sums)
      if (std::abs(v) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------- piecewise constants

template <class T>
PiecewiseConstant<T>::PiecewiseConstant(int b, int m, int s) : b_(b), m_(m), s_(s) {
  if (b < 2 || m < 0 || s < 1) throw ValidationError("PiecewiseConstant: invalid b, m or s");
  side_ = ipow(static_cast<std::uint64_t>(b), m);
  if (!ipow_fits(side_, s) || ipow(side_, s) > (std::uint64_t{1} << 32))
    throw BudgetExceeded("PiecewiseConstant: b^{ms} cells exceed 2^32");
  values_.assign(static_cast<std::size_t>(ipow(side_, s)), T(0));
}

template <class T>
PiecewiseConstant<T>::PiecewiseConstant(int b, int m, int s, std::vector<T> values)
    : PiecewiseConstant(b, m, s) {
  if (values.size() != values_.size()) throw ValidationError("PiecewiseConstant: wrong number of cell values");
  values_ = std::move(values);
}

template <class T>
std::size_t PiecewiseConstant<T>::cell_of(const BadicPoint& p) const {
  if (p.base() != b_ || p.dim() != s_) throw ValidationError("PiecewiseConstant: point mismatch");
  std::uint64_t c = 0;
  for (int l = 0; l < s_; ++l) c = c * side_ + locate_coord(p, l, m_);
  return static_cast<std::size_t>(c);
}

template class PiecewiseConstant<double>;
template class PiecewiseConstant<mpq_class>;

// ---------------------------------------------------------------- evaluation

double psi_eval(int b, int j, int i, std::uint64_t k, double x) {
  if (j < 0) throw ValidationError("psi_eval: negative level");
  if (!(x >= 0.0 && x < 1.0)) return 0.0;
  if (j == 0) {
    if (i != 0 || k != 0) throw ValidationError("psi_eval: invalid index at level 0");
    return 1.0;
  }
  if (i < 0 || i >= b) throw ValidationError("psi_eval: i out of range");
  const double scale = std::pow(static_cast<double>(b), j - 1);
  if (static_cast<double>(k) >= scale) throw ValidationError("psi_eval: k out of range");
  const double y = x * scale - static_cast<double>(k);
  if (y < 0.0 || y >= 1.0) return 0.0;
  const int child = std::min(b - 1, static_cast<int>(std::floor(y * b)));
  return std::pow(static_cast<double>(b), 0.5 * j - 1.0) * (child == i ? b - 1.0 : -1.0);
}

RootScaled psi_eval_exact(int b, int j, int i, std::uint64_t k, const BadicPoint& p, int l) {
  if (j == 0) return RootScaled(b, 1);
  if (locate_coord(p, l, j - 1) != k) return RootScaled(b, 0);
  const std::uint64_t child = locate_coord(p, l, j) - static_cast<std::uint64_t>(b) * k;
  const long v = child == static_cast<std::uint64_t>(i) ? b - 1 : -1;
  return RootScaled(b, mpq_class(v, b), j);
}

double Psi_eval(int b, const WaveletIndex& idx, std::span<const double> x) {
  if (static_cast<int>(x.size()) != idx.dim()) throw ValidationError("Psi_eval: dimension mismatch");
  idx.validate(b);
  double v = 1.0;
  for (int l = 0; l < idx.dim() && v != 0.0; ++l) v *= psi_eval(b, idx.j[l], idx.i[l], idx.k[l], x[l]);
  return v;
}

RootScaled Psi_eval_exact(const WaveletIndex& idx, const BadicPoint& p) {
  if (p.dim() != idx.dim()) throw ValidationError("Psi_eval: dimension mismatch");
  idx.validate(p.base());
  RootScaled v(p.base(), 1);
  for (int l = 0; l < idx.dim() && !v.is_zero(); ++l)
    v = v * psi_eval_exact(p.base(), idx.j[l], idx.i[l], idx.k[l], p, l);
  return v;
}

namespace {

// Sum over support cells of value * prod_l (b [child == i] - 1).
template <class T>
T integer_weighted_sum(const PiecewiseConstant<T>& f, const WaveletIndex& idx) {
  const int s = f.dim(), m = f.level(), b = f.base();
  if (idx.dim() != s) throw ValidationError("inner_product_pc: dimension mismatch");
  idx.validate(b);
  for (int l = 0; l < s; ++l)
    if (idx.j[l] > m) throw ValidationError("inner_product_pc: wavelet level exceeds resolution");
  const auto bb = static_cast<std::uint64_t>(b);
  std::vector<std::uint64_t> lo(s), count(s), group(s);
  for (int l = 0; l < s; ++l) {
    if (idx.j[l] == 0) {
      lo[l] = 0;
      count[l] = f.side();
      group[l] = 0;
    } else {
      const std::uint64_t width = ipow(bb, m - idx.j[l] + 1);
      lo[l] = idx.k[l] * width;
      count[l] = width;
      group[l] = width / bb;
    }
  }
  std::vector<std::uint64_t> off(s, 0);
  T total(0);
  while (true) {
    std::uint64_t cell = 0;
    long w = 1;
    for (int l = 0; l < s; ++l) {
      cell = cell * f.side() + lo[l] + off[l];
      if (group[l]) w *= (off[l] / group[l] == static_cast<std::uint64_t>(idx.i[l])) ? b - 1 : -1;
    }
    total += f[cell] * T(w);
    int l = s - 1;
    while (l >= 0 && ++off[l] == count[l]) off[l--] = 0;
    if (l < 0) break;
  }
  return total;
}

}  // namespace

RootScaled inner_product_pc(const PiecewiseConstantQ& f, const WaveletIndex& idx) {
  const mpq_class sum = integer_weighted_sum(f, idx);
  // Psi = b^{|j|/2 - J} * weights, cell volume b^{-ms}.
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(f.base()),
                static_cast<unsigned long>(idx.active() + f.level() * f.dim()));
  return RootScaled(f.base(), sum / mpq_class(den), idx.level());
}

double inner_product_pc(const PiecewiseConstantD& f, const WaveletIndex& idx) {
  const double sum = integer_weighted_sum(f, idx);
  const double b = f.base();
  return sum * std::pow(b, 0.5 * idx.level() - idx.active() - static_cast<double>(f.level()) * f.dim());
}

double coeff_smooth(const std::function<double(std::span<const double>)>& f, int b,
                    const WaveletIndex& idx, double tol, int max_nodes) {
  idx.validate(b);
  const int s = idx.dim();
  // Per axis: constancy cells [lo, lo + w) and the wavelet value there.
  struct Cell {
    double lo, w, value;
  };
  std::vector<std::vector<Cell>> cells(s);
  for (int l = 0; l < s; ++l) {
    const int j = idx.j[l];
    if (j == 0) {
      cells[l].push_back({0.0, 1.0, 1.0});
      continue;
    }
    const double w = std::pow(static_cast<double>(b), -j);
    const double amp = std::pow(static_cast<double>(b), 0.5 * j - 1.0);
    for (int c = 0; c < b; ++c)
      cells[l].push_back({(static_cast<double>(idx.k[l]) * b + c) * w, w, amp * (c == idx.i[l] ? b - 1.0 : -1.0)});
  }
  auto integrate = [&](int n) {
    const QuadRule& gl = gauss_legendre(n);
    std::vector<double> x(s);
    std::vector<std::size_t> ci(s, 0);
    std::vector<int> ni(s, 0);
    double total = 0.0;
    while (true) {
      double w = 1.0;
      for (int l = 0; l < s; ++l) {
        const Cell& c = cells[l][ci[l]];
        x[l] = c.lo + 0.5 * c.w * (gl.nodes[ni[l]] + 1.0);
        w *= 0.5 * c.w * gl.weights[ni[l]] * c.value;
      }
      total += w * f(x);
      int l = s - 1;
      while (l >= 0) {
        if (++ni[l] < n) break;
        ni[l] = 0;
        if (++ci[l] < cells[l].size()) break;
        ci[l] = 0;
        --l;
      }
      if (l < 0) break;
    }
    return total;
  };
  double prev = integrate(4);
  for (int n = 8; n <= max_nodes; n *= 2) {
    const double cur = integrate(n);
    if (std::abs(cur - prev) < tol) return cur;
    prev = cur;
  }
  throw BudgetExceeded("coeff_smooth: no convergence within " + std::to_string(max_nodes) + " nodes");
}

// ---------------------------------------------------------------- norms

double combine_level_blocks(const LevelBlocks& blocks, const SpaceParams& sp) {
  const double ip = sp.p.reciprocal();
  const double expo = sp.alpha - ip + 0.5;
  double acc = 0.0;
  for (const auto& [j, block] : blocks) {
    int level = 0;
    for (int v : j) level += v;
    const double inner = sp.p.is_infinite() ? block : std::pow(block, ip);
    const double term = std::pow(static_cast<double>(sp.b), expo * level) * inner;
    if (sp.q.is_infinite())
      acc = std::max(acc, term);
    else
      acc += std::pow(term, sp.q.value());
  }
  return sp.q.is_infinite() ? acc : std::pow(acc, 1.0 / sp.q.value());
}

static void accumulate_block(double& block, double c, const Exponent& p) {
  if (p.is_infinite())
    block = std::max(block, std::abs(c));
  else
    block += std::pow(std::abs(c), p.value());
}

double haar_norm(const CoeffMap& c, const SpaceParams& sp) {
  LevelBlocks blocks;
  for (const auto& [idx, v] : c.entries()) accumulate_block(blocks[idx.j], v, sp.p);
  SpaceParams local = sp;
  local.b = c.base();
  return combine_level_blocks(blocks, local);
}

namespace {

// Haar transform along one axis for output level jl.
std::vector<double> transform_axis(const std::vector<double>& in, const std::vector<std::uint64_t>& dims,
                                   int axis, int jl, int b, int m) {
  std::uint64_t outer = 1, inner = 1;
  for (int a = 0; a < axis; ++a) outer *= dims[a];
  for (std::size_t a = axis + 1; a < dims.size(); ++a) inner *= dims[a];
  const std::uint64_t n = dims[axis];
  const auto bb = static_cast<std::uint64_t>(b);
  const std::uint64_t nout = jl == 0 ? 1 : ipow(bb, jl);
  const std::uint64_t group = n / nout;
  const double vol = std::pow(static_cast<double>(b), -m);
  const double amp = std::pow(static_cast<double>(b), 0.5 * jl - 1.0);
  std::vector<double> out(outer * nout * inner);
  std::vector<double> cellsum(nout * inner);
  for (std::uint64_t o = 0; o < outer; ++o) {
    const double* src = in.data() + o * n * inner;
    std::fill(cellsum.begin(), cellsum.end(), 0.0);
    for (std::uint64_t c = 0; c < nout; ++c)
      for (std::uint64_t t = 0; t < group; ++t) {
        const double* row = src + (c * group + t) * inner;
        double* dst = cellsum.data() + c * inner;
        for (std::uint64_t r = 0; r < inner; ++r) dst[r] += row[r];
      }
    double* dst = out.data() + o * nout * inner;
    if (jl == 0) {
      for (std::uint64_t r = 0; r < inner; ++r) dst[r] = cellsum[r] * vol;
      continue;
    }
    for (std::uint64_t parent = 0; parent < nout / bb; ++parent)
      for (std::uint64_t r = 0; r < inner; ++r) {
        double psum = 0.0;
        for (std::uint64_t c = 0; c < bb; ++c) psum += cellsum[(parent * bb + c) * inner + r];
        for (std::uint64_t c = 0; c < bb; ++c) {
          const std::uint64_t cell = parent * bb + c;
          dst[cell * inner + r] = amp * vol * (static_cast<double>(b) * cellsum[cell * inner + r] - psum);
        }
      }
  }
  return out;
}

void transform_rec(const std::vector<double>& data, std::vector<std::uint64_t>& dims, int axis, std::vector<int>& j,
                   int b, int m,
                   const std::function<void(const std::vector<int>&, std::span<const double>)>& fn) {
  if (axis == static_cast<int>(dims.size())) {
    fn(j, data);
    return;
  }
  const std::uint64_t saved = dims[axis];
  for (int jl = 0; jl <= m; ++jl) {
    std::vector<double> next = transform_axis(data, dims, axis, jl, b, m);
    dims[axis] = jl == 0 ? 1 : ipow(static_cast<std::uint64_t>(b), jl);
    j[axis] = jl;
    transform_rec(next, dims, axis + 1, j, b, m, fn);
    dims[axis] = saved;
  }
}

}  // namespace

void for_each_coefficient_block(
    const PiecewiseConstantD& f,
    const std::function<void(const std::vector<int>& j, std::span<const double> coeffs)>& fn) {
  std::vector<std::uint64_t> dims(f.dim(), f.side());
  std::vector<int> j(f.dim(), 0);
  transform_rec(f.values(), dims, 0, j, f.base(), f.level(), fn);
}

CoeffMap analyze(const PiecewiseConstantD& f) {
  CoeffMap cm(f.base(), f.dim());
  const int s = f.dim();
  const auto b = static_cast<std::uint64_t>(f.base());
  for_each_coefficient_block(f, [&](const std::vector<int>& j, std::span<const double> coeffs) {
    std::vector<std::uint64_t> extent(s);
    for (int l = 0; l < s; ++l) extent[l] = j[l] == 0 ? 1 : ipow(b, j[l]);
    for (std::size_t e = 0; e < coeffs.size(); ++e) {
      WaveletIndex idx{j, std::vector<std::uint64_t>(s, 0), std::vector<int>(s, 0)};
      std::uint64_t v = e;
      for (int l = s - 1; l >= 0; --l) {
        const std::uint64_t c = v % extent[l];
        v /= extent[l];
        if (j[l] > 0) {
          idx.k[l] = c / b;
          idx.i[l] = static_cast<int>(c % b);
        }
      }
      cm.set(idx, coeffs[e]);
    }
  });
  return cm;
}

double haar_norm(const PiecewiseConstantD& f, const SpaceParams& sp) {
  LevelBlocks blocks;
  for_each_coefficient_block(f, [&](const std::vector<int>& j, std::span<const double> coeffs) {
    double& block = blocks[j];
    for (double c : coeffs) accumulate_block(block, c, sp.p);
  });
  SpaceParams local = sp;
  local.b = f.base();
  return combine_level_blocks(blocks, local);
}

double series_eval(const CoeffMap& c, std::span<const double> x) {
  double total = 0.0;
  for (const auto& [idx, v] : c.entries()) total += v * Psi_eval(c.base(), idx, x);
  return total;
}

double evaluation_constant(int b, double alpha, const Exponent& p, const Exponent& q) {
  const double ipd = p.conjugate().reciprocal();
  const double base = std::pow(static_cast<double>(b), ipd);
  const Exponent qd = q.conjugate();
  if (qd.is_infinite()) return base;
  const double gap = alpha - p.reciprocal();
  if (gap <= 0) throw ValidationError("evaluation_constant: need alpha > 1/p for q > 1");
  return base * std::pow(1.0 - std::pow(static_cast<double>(b), -qd.value() * gap), -1.0 / qd.value());
}

// ---------------------------------------------------------------- frame identities

FrameReport frame_check(int b, int j, std::uint64_t k, int precision) {
  if (j < 1 || precision < j) throw ValidationError("frame_check: need 1 <= j <= precision");
  const auto bb = static_cast<std::uint64_t>(b);
  if (k >= ipow(bb, j - 1)) throw ValidationError("frame_check: k out of range");
  FrameReport rep;
  auto fail = [&rep](double dev, const std::string& what) {
    if (rep.exact) rep.first_failure = what;
    rep.exact = false;
    rep.max_deviation = std::max(rep.max_deviation, dev);
  };

  const std::uint64_t grid = ipow(bb, precision);
  for (std::uint64_t c = 0; c < grid; ++c) {
    const BadicPoint x(b, precision, {c});
    RootScaled sum(b, 0);
    for (int i = 0; i < b; ++i) sum = sum + psi_eval_exact(b, j, i, k, x, 0);
    ++rep.sum_checks;
    if (!sum.is_zero()) fail(std::abs(sum.to_double()), "zero-sum at x=" + std::to_string(c) + "/b^precision");
  }

  // Gram entries; supports E^{j-1}_k and E^{j'-1}_{k'} are nested or disjoint,
  // disjoint pairs integrate to exactly zero.
  for (int jp = 1; jp <= precision; ++jp) {
    std::uint64_t klo, khi;
    if (jp >= j) {
      klo = k * ipow(bb, jp - j);
      khi = klo + ipow(bb, jp - j);
    } else {
      klo = k / ipow(bb, j - jp);
      khi = klo + 1;
    }
    const int jf = std::max(j, jp);
    for (std::uint64_t kp = klo; kp < khi; ++kp) {
      // Finer support E^{jf-1}_{kf}; integrate over its b level-jf cells.
      const std::uint64_t kf = jp >= j ? kp : k;
      for (int i = 0; i < b; ++i)
        for (int ip = 0; ip < b; ++ip) {
          RootScaled integral(b, 0);
          for (std::uint64_t c = 0; c < bb; ++c) {
            const BadicPoint x(b, jf, {kf * bb + c});
            integral = integral + psi_eval_exact(b, j, i, k, x, 0) * psi_eval_exact(b, jp, ip, kp, x, 0);
          }
          mpz_class vol;
          mpz_ui_pow_ui(vol.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(jf));
          integral = integral * RootScaled(b, mpq_class(1) / mpq_class(vol));
          const bool diag = jp == j && kp == k;
          const mpq_class expected = diag ? mpq_class((i == ip ? b : 0) - 1, b) : mpq_class(0);
          ++rep.gram_checks;
          if (!(integral == RootScaled(b, expected))) {
            const double dev = std::abs((integral - RootScaled(b, expected)).to_double());
            fail(dev, "Gram j=" + std::to_string(j) + " k=" + std::to_string(k) + " i=" + std::to_string(i) +
                          " j'=" + std::to_string(jp) + " k'=" + std::to_string(kp) + " i'=" + std::to_string(ip));
          }
        }
    }
  }
  return rep;
}

// ---------------------------------------------------------------- IO

void write_coeff_map(std::ostream& os, const CoeffMap& c) {
  char buf[64];
  for (const auto& [idx, v] : c.entries()) {
    for (int x : idx.j) os << x << ' ';
    for (auto x : idx.k) os << x << ' ';
    for (int x : idx.i) os << x << ' ';
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << '\n';
  }
}

CoeffMap read_coeff_map(std::istream& is, int b, int s) {
  CoeffMap c(b, s);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream ls(line);
    WaveletIndex idx{std::vector<int>(s), std::vector<std::uint64_t>(s), std::vector<int>(s)};
    double v;
    bool ok = true;
    for (int l = 0; l < s; ++l) ok = ok && static_cast<bool>(ls >> idx.j[l]);
    for (int l = 0; l < s; ++l) ok = ok && static_cast<bool>(ls >> idx.k[l]);
    for (int l = 0; l < s; ++l) ok = ok && static_cast<bool>(ls >> idx.i[l]);
    ok = ok && static_cast<bool>(ls >> v);
    std::string extra;
    if (!ok || (ls >> extra)) throw ValidationError("coefficient file line " + std::to_string(lineno) + ": malformed entry");
    c.set(idx, v);
  }
  return c;
}

static void put_i32(std::ostream& os, std::int32_t v) {
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((static_cast<std::uint32_t>(v) >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), 4);
}

static std::int32_t get_i32(std::istream& is) {
  unsigned char buf[4];
  if (!is.read(reinterpret_cast<char*>(buf), 4)) throw ValidationError("piecewise constant: truncated header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return static_cast<std::int32_t>(v);
}

void write_piecewise_constant(std::ostream& os, const PiecewiseConstantD& f) {
  put_i32(os, f.base());
  put_i32(os, f.level());
  put_i32(os, f.dim());
  for (double v : f.values()) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(buf), 8);
  }
}

PiecewiseConstantD read_piecewise_constant(std::istream& is) {
  const int b = get_i32(is), m = get_i32(is), s = get_i32(is);
  PiecewiseConstantD f(b, m, s);
  for (auto& v : f.values()) {
    unsigned char buf[8];
    if (!is.read(reinterpret_cast<char*>(buf), 8)) throw ValidationError("piecewise constant: truncated cell values");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    std::memcpy(&v, &bits, 8);
  }
  return f;
}

}  // namespace qmcwav
