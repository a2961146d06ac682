#include "qmcwav/badic.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "qmcwav/errors.hpp"

namespace qmcwav {

bool ipow_fits(std::uint64_t b, int e) {
  if (e < 0) return false;
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / b) return false;
    r *= b;
  }
  return true;
}

std::uint64_t ipow(std::uint64_t b, int e) {
  if (e < 0) throw ValidationError("ipow: negative exponent");
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / b)
      throw ValidationError("ipow: " + std::to_string(b) + "^" + std::to_string(e) +
                            " overflows 64 bits");
    r *= b;
  }
  return r;
}

static void composition_rec(int remaining, int pos, std::vector<int>& j,
                            const std::function<void(const std::vector<int>&)>& fn) {
  const int parts = static_cast<int>(j.size());
  if (pos == parts - 1) {
    j[pos] = remaining;
    fn(j);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    j[pos] = v;
    composition_rec(remaining - v, pos + 1, j, fn);
  }
}

void for_each_composition(int total, int parts,
                          const std::function<void(const std::vector<int>&)>& fn) {
  if (parts <= 0 || total < 0) return;
  std::vector<int> j(parts, 0);
  composition_rec(total, 0, j, fn);
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

BadicPoint::BadicPoint(int base, int precision, std::vector<std::uint64_t> numerators)
    : base_(base), precision_(precision), num_(std::move(numerators)) {
  if (base < 2) throw ValidationError("base must be >= 2");
  if (precision < 0) throw ValidationError("precision must be >= 0");
  const std::uint64_t scale = ipow(static_cast<std::uint64_t>(base), precision);
  for (auto n : num_)
    if (n >= scale) throw ValidationError("numerator out of range [0, b^m)");
}

int BadicPoint::digit(int l, int r) const {
  if (r < 0 || r >= precision_) return 0;
  const std::uint64_t b = static_cast<std::uint64_t>(base_);
  return static_cast<int>((num_[l] / ipow(b, precision_ - 1 - r)) % b);
}

double BadicPoint::coordinate(int l) const {
  return static_cast<double>(num_[l]) /
         static_cast<double>(ipow(static_cast<std::uint64_t>(base_), precision_));
}

std::vector<double> BadicPoint::coordinates() const {
  std::vector<double> x(num_.size());
  for (int l = 0; l < dim(); ++l) x[l] = coordinate(l);
  return x;
}

BadicPoint BadicPoint::refined(int precision) const {
  if (precision < precision_) throw ValidationError("refined: precision can only grow");
  const std::uint64_t f = ipow(static_cast<std::uint64_t>(base_), precision - precision_);
  std::vector<std::uint64_t> n(num_);
  for (auto& v : n) v *= f;
  return BadicPoint(base_, precision, std::move(n));
}

bool operator==(const BadicPoint& a, const BadicPoint& b) {
  if (a.base_ != b.base_ || a.dim() != b.dim()) return false;
  const int m = std::max(a.precision_, b.precision_);
  return a.refined(m).num_ == b.refined(m).num_;
}

BadicPoint point_from_rational(std::span<const std::uint64_t> numerators, int b, int m) {
  return BadicPoint(b, m, std::vector<std::uint64_t>(numerators.begin(), numerators.end()));
}

BadicPoint snap_to_grid(std::span<const double> x, int b, int m) {
  const std::uint64_t scale = ipow(static_cast<std::uint64_t>(b), m);
  std::vector<std::uint64_t> n(x.size());
  for (std::size_t l = 0; l < x.size(); ++l) {
    if (!(x[l] >= 0.0 && x[l] < 1.0)) throw ValidationError("snap_to_grid: coordinate outside [0,1)");
    const long double v = std::floor(static_cast<long double>(x[l]) * static_cast<long double>(scale));
    n[l] = std::min<std::uint64_t>(static_cast<std::uint64_t>(v), scale - 1);
  }
  return BadicPoint(b, m, std::move(n));
}

std::uint64_t locate_coord(const BadicPoint& p, int l, int j) {
  const auto b = static_cast<std::uint64_t>(p.base());
  if (j <= p.precision()) return p.numerator(l) / ipow(b, p.precision() - j);
  const std::uint64_t f = ipow(b, j - p.precision());
  const std::uint64_t n = p.numerator(l);
  if (n != 0 && n > std::numeric_limits<std::uint64_t>::max() / f)
    throw ValidationError("locate: cell index overflows 64 bits");
  return n * f;
}

std::vector<std::uint64_t> locate(const BadicPoint& p, std::span<const int> j) {
  if (static_cast<int>(j.size()) != p.dim()) throw ValidationError("locate: dimension mismatch");
  std::vector<std::uint64_t> k(j.size());
  for (int l = 0; l < p.dim(); ++l) k[l] = locate_coord(p, l, j[l]);
  return k;
}

double ElementaryInterval::volume() const {
  int total = 0;
  for (int v : j) total += v;
  return std::pow(static_cast<double>(base), -total);
}

std::string ElementaryInterval::to_string() const {
  std::ostringstream os;
  os << "j=(";
  for (std::size_t l = 0; l < j.size(); ++l) os << (l ? "," : "") << j[l];
  os << ") k=(";
  for (std::size_t l = 0; l < k.size(); ++l) os << (l ? "," : "") << k[l];
  os << ")";
  return os.str();
}

bool interval_contains(const ElementaryInterval& e, const BadicPoint& p) {
  if (e.base != p.base() || static_cast<int>(e.j.size()) != p.dim() || e.k.size() != e.j.size())
    throw ValidationError("interval_contains: base or dimension mismatch");
  return locate(p, e.j) == e.k;
}

PointSet::PointSet(int base, int precision, int dim)
    : base_(base), precision_(precision), dim_(dim) {
  if (base < 2) throw ValidationError("base must be >= 2");
  if (dim < 1) throw ValidationError("dimension must be >= 1");
  scale_ = ipow(static_cast<std::uint64_t>(base), precision);
}

void PointSet::push_back(const BadicPoint& p) {
  if (p.base() != base_ || p.dim() != dim_) throw ValidationError("PointSet: base or dimension mismatch");
  if (p.precision() > precision_) throw ValidationError("PointSet: point precision exceeds set precision");
  push_back(p.refined(precision_).numerators());
}

void PointSet::push_back(std::span<const std::uint64_t> numerators) {
  if (static_cast<int>(numerators.size()) != dim_) throw ValidationError("PointSet: dimension mismatch");
  for (auto n : numerators) {
    if (n >= scale_) throw ValidationError("PointSet: numerator out of range");
    num_.push_back(n);
  }
}

double PointSet::coordinate(std::size_t n, int l) const {
  return static_cast<double>(numerator(n, l)) / static_cast<double>(scale_);
}

BadicPoint PointSet::point(std::size_t n) const {
  return BadicPoint(base_, precision_,
                    std::vector<std::uint64_t>(num_.begin() + n * dim_, num_.begin() + (n + 1) * dim_));
}

std::vector<std::vector<double>> PointSet::coordinates_by_dim() const {
  std::vector<std::vector<double>> x(dim_, std::vector<double>(size()));
  for (std::size_t n = 0; n < size(); ++n)
    for (int l = 0; l < dim_; ++l) x[l][n] = coordinate(n, l);
  return x;
}

int PointSet::log_size() const {
  std::uint64_t v = 1;
  for (int m = 0; m < 64; ++m) {
    if (v == size()) return m;
    if (v > size() / static_cast<std::uint64_t>(base_)) return -1;
    v *= static_cast<std::uint64_t>(base_);
  }
  return -1;
}

static char digit_char(int d) { return static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10)); }

static int char_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
  return -1;
}

void write_point_set(std::ostream& os, const PointSet& ps) {
  if (ps.base() > 36) throw ValidationError("point-set text format supports b <= 36");
  os << ps.base() << ' ' << ps.precision() << ' ' << ps.dim() << ' ' << ps.size() << '\n';
  const auto b = static_cast<std::uint64_t>(ps.base());
  std::string digits(static_cast<std::size_t>(ps.precision()), '0');
  for (std::size_t n = 0; n < ps.size(); ++n) {
    for (int l = 0; l < ps.dim(); ++l) {
      std::uint64_t v = ps.numerator(n, l);
      for (int r = ps.precision() - 1; r >= 0; --r) {
        digits[r] = digit_char(static_cast<int>(v % b));
        v /= b;
      }
      if (l) os << ' ';
      os << (ps.precision() == 0 ? std::string("-") : digits);
    }
    os << '\n';
  }
}

PointSet read_point_set(std::istream& is) {
  long long b = 0, m = -1, s = 0, count = -1;
  if (!(is >> b >> m >> s >> count)) throw ValidationError("point set: malformed header 'b m s N'");
  if (b < 2 || b > 36 || m < 0 || s < 1 || count < 0)
    throw ValidationError("point set: header values out of range");
  PointSet ps(static_cast<int>(b), static_cast<int>(m), static_cast<int>(s));
  std::vector<std::uint64_t> num(static_cast<std::size_t>(s));
  std::string tok;
  for (long long n = 0; n < count; ++n) {
    for (long long l = 0; l < s; ++l) {
      if (!(is >> tok)) throw ValidationError("point set: expected " + std::to_string(count) + " points");
      std::uint64_t v = 0;
      if (m == 0) {
        if (tok != "-" && tok != "0") throw ValidationError("point set: precision-0 coordinate must be '-'");
      } else {
        if (static_cast<long long>(tok.size()) != m)
          throw ValidationError("point set: point " + std::to_string(n) + " has a digit string of wrong length");
        for (char c : tok) {
          const int d = char_digit(c);
          if (d < 0 || d >= b) throw ValidationError("point set: invalid digit '" + std::string(1, c) + "'");
          v = v * static_cast<std::uint64_t>(b) + static_cast<std::uint64_t>(d);
        }
      }
      num[static_cast<std::size_t>(l)] = v;
    }
    ps.push_back(num);
  }
  return ps;
}

void save_point_set(const std::string& path, const PointSet& ps) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open '" + path + "' for writing");
  write_point_set(os, ps);
}

PointSet load_point_set(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open '" + path + "'");
  return read_point_set(is);
}

}  // namespace qmcwav
