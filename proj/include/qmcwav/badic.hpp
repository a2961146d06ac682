#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace qmcwav {

// b^e as an unsigned 64-bit integer; throws ValidationError on overflow.
std::uint64_t ipow(std::uint64_t b, int e);
bool ipow_fits(std::uint64_t b, int e);

// Calls fn(j) for every j in N_0^parts with |j| = total, in ascending
// lexicographic order.
void for_each_composition(int total, int parts,
                          const std::function<void(const std::vector<int>&)>& fn);
std::uint64_t binomial(int n, int k);

// A point of [0,1)^s whose coordinates are b-adic rationals n_l / b^m.
// Stored as numerators; digit r (0-based, most significant first) of
// coordinate l is floor(n_l / b^{m-1-r}) mod b. b^m must fit in 64 bits.
class BadicPoint {
 public:
  BadicPoint(int base, int precision, std::vector<std::uint64_t> numerators);

  int base() const { return base_; }
  int precision() const { return precision_; }
  int dim() const { return static_cast<int>(num_.size()); }
  std::uint64_t numerator(int l) const { return num_[l]; }
  const std::vector<std::uint64_t>& numerators() const { return num_; }

  // Zero beyond the precision.
  int digit(int l, int r) const;
  double coordinate(int l) const;
  std::vector<double> coordinates() const;

  // Same point at a finer precision (zero-padded digits).
  BadicPoint refined(int precision) const;

  friend bool operator==(const BadicPoint& a, const BadicPoint& b);

 private:
  int base_;
  int precision_;
  std::vector<std::uint64_t> num_;
};

BadicPoint point_from_rational(std::span<const std::uint64_t> numerators, int b, int m);

// Truncates x_l in [0,1) to m base-b digits.
BadicPoint snap_to_grid(std::span<const double> x, int b, int m);

// Index of the level-j cell containing coordinate l, by digit truncation.
// Levels above the precision zero-pad; throws if b^j overflows.
std::uint64_t locate_coord(const BadicPoint& p, int l, int j);
std::vector<std::uint64_t> locate(const BadicPoint& p, std::span<const int> j);

// E^j_k = prod_l [k_l b^{-j_l}, (k_l+1) b^{-j_l}).
struct ElementaryInterval {
  int base = 2;
  std::vector<int> j;
  std::vector<std::uint64_t> k;

  double volume() const;
  std::string to_string() const;
};

bool interval_contains(const ElementaryInterval& e, const BadicPoint& p);

// Multiset of points sharing base, precision and dimension.
class PointSet {
 public:
  PointSet(int base, int precision, int dim);

  int base() const { return base_; }
  int precision() const { return precision_; }
  int dim() const { return dim_; }
  std::size_t size() const { return num_.size() / static_cast<std::size_t>(dim_); }

  void push_back(const BadicPoint& p);
  void push_back(std::span<const std::uint64_t> numerators);

  std::uint64_t numerator(std::size_t n, int l) const { return num_[n * dim_ + l]; }
  double coordinate(std::size_t n, int l) const;
  BadicPoint point(std::size_t n) const;

  // Coordinates as doubles, coordinate-major: result[l][n].
  std::vector<std::vector<double>> coordinates_by_dim() const;

  // m with b^m == size(), or -1.
  int log_size() const;

 private:
  int base_;
  int precision_;
  int dim_;
  std::uint64_t scale_;
  std::vector<std::uint64_t> num_;
};

// Text format: header "b m s N", then N lines of s digit strings.
// Digits 0-9 then a-z, so b <= 36.
void write_point_set(std::ostream& os, const PointSet& ps);
PointSet read_point_set(std::istream& is);
void save_point_set(const std::string& path, const PointSet& ps);
PointSet load_point_set(const std::string& path);

}  // namespace qmcwav
