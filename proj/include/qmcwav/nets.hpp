#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qmcwav/badic.hpp"

namespace qmcwav {

bool is_prime(int n);

// s generator matrices of size m x m over Z_b.
//
// Convention: point n has base-b digits d_0, d_1, ... (least significant
// first). Coordinate l has output digits y = C_l d mod b, and y_0 is the most
// significant digit: x_l = sum_r y_r b^{-r-1}.
struct GeneratorMatrices {
  int base = 2;
  int m = 0;
  int s = 1;
  std::vector<int> entries;  // s blocks of m*m, row-major

  int& at(int l, int r, int c) { return entries[(static_cast<std::size_t>(l) * m + r) * m + c]; }
  int at(int l, int r, int c) const { return entries[(static_cast<std::size_t>(l) * m + r) * m + c]; }
};

GeneratorMatrices identity_matrices(int b, int m, int s);
// C_l = P^{l-1} mod b with P[r][c] = binom(c, r).
GeneratorMatrices faure_matrices(int b, int m, int s);

PointSet van_der_corput(int b, int m);
PointSet faure_net(int b, int m, int s);
PointSet digital_net(const GeneratorMatrices& g);

// Matrices file: s blocks of m rows, each row m whitespace-separated digits.
GeneratorMatrices read_matrices(std::istream& is, int b, int m, int s);
GeneratorMatrices load_matrices(const std::string& path, int b, int m, int s);

struct NetCertificate {
  int b = 2;
  int m = 0;
  int s = 1;
  int t = 0;
  bool verified = false;
  std::optional<ElementaryInterval> witness;  // first underfull cell in enumeration order
  std::uint64_t witness_count = 0;
};

// Checks every E^j_k with |j| = m - t for exactly b^t points. Shapes are
// enumerated in ascending lexicographic order of j, cells in ascending
// lexicographic order of k.
NetCertificate verify_net(const PointSet& P, int t);
int t_value(const PointSet& P);

}  // namespace qmcwav
