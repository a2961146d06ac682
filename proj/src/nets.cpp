#include "qmcwav/nets.hpp"

#include <fstream>
#include <istream>

#include "qmcwav/errors.hpp"

namespace qmcwav {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

GeneratorMatrices identity_matrices(int b, int m, int s) {
  GeneratorMatrices g{b, m, s, std::vector<int>(static_cast<std::size_t>(s) * m * m, 0)};
  for (int l = 0; l < s; ++l)
    for (int r = 0; r < m; ++r) g.at(l, r, r) = 1;
  return g;
}

GeneratorMatrices faure_matrices(int b, int m, int s) {
  if (!is_prime(b)) throw ValidationError("faure: base must be prime");
  if (s < 1 || s > b) throw ValidationError("faure: need 1 <= s <= b");
  if (m < 0) throw ValidationError("faure: m must be >= 0");
  // Pascal table mod b.
  std::vector<std::vector<int>> binom(m, std::vector<int>(m, 0));
  for (int n = 0; n < m; ++n) {
    binom[n][0] = 1;
    for (int k = 1; k <= n; ++k) binom[n][k] = (binom[n - 1][k - 1] + (k < n ? binom[n - 1][k] : 0)) % b;
  }
  GeneratorMatrices g{b, m, s, std::vector<int>(static_cast<std::size_t>(s) * m * m, 0)};
  for (int l = 0; l < s; ++l) {
    // (P^a)[r][c] = binom(c, r) a^{c-r}
    for (int r = 0; r < m; ++r) {
      for (int c = r; c < m; ++c) {
        long long pw = 1;
        for (int e = 0; e < c - r; ++e) pw = pw * l % b;
        g.at(l, r, c) = static_cast<int>(binom[c][r] * pw % b);
      }
    }
  }
  return g;
}

PointSet digital_net(const GeneratorMatrices& g) {
  if (!is_prime(g.base)) throw ValidationError("digital_net: base must be prime");
  if (g.m < 0 || g.s < 1 || g.entries.size() != static_cast<std::size_t>(g.s) * g.m * g.m)
    throw ValidationError("digital_net: matrix dimension mismatch");
  for (int v : g.entries)
    if (v < 0 || v >= g.base) throw ValidationError("digital_net: entries must lie in [0,b)");
  const auto b = static_cast<std::uint64_t>(g.base);
  const std::uint64_t count = ipow(b, g.m);
  PointSet ps(g.base, g.m, g.s);
  std::vector<int> d(g.m);
  std::vector<std::uint64_t> num(g.s);
  for (std::uint64_t n = 0; n < count; ++n) {
    std::uint64_t v = n;
    for (int r = 0; r < g.m; ++r) {
      d[r] = static_cast<int>(v % b);
      v /= b;
    }
    for (int l = 0; l < g.s; ++l) {
      std::uint64_t x = 0;
      for (int r = 0; r < g.m; ++r) {
        long long y = 0;
        for (int c = 0; c < g.m; ++c) y += static_cast<long long>(g.at(l, r, c)) * d[c];
        x = x * b + static_cast<std::uint64_t>(y % g.base);
      }
      num[l] = x;
    }
    ps.push_back(num);
  }
  return ps;
}

PointSet van_der_corput(int b, int m) {
  if (b < 2) throw ValidationError("van_der_corput: base must be >= 2");
  if (m < 0) throw ValidationError("van_der_corput: m must be >= 0");
  const auto bb = static_cast<std::uint64_t>(b);
  const std::uint64_t count = ipow(bb, m);
  PointSet ps(b, m, 1);
  for (std::uint64_t n = 0; n < count; ++n) {
    std::uint64_t v = n, x = 0;
    for (int r = 0; r < m; ++r) {
      x = x * bb + v % bb;
      v /= bb;
    }
    const std::uint64_t num[1] = {x};
    ps.push_back(num);
  }
  return ps;
}

PointSet faure_net(int b, int m, int s) { return digital_net(faure_matrices(b, m, s)); }

GeneratorMatrices read_matrices(std::istream& is, int b, int m, int s) {
  if (b < 2 || m < 0 || s < 1) throw ValidationError("matrices: invalid b, m or s");
  GeneratorMatrices g{b, m, s, std::vector<int>(static_cast<std::size_t>(s) * m * m, 0)};
  for (int l = 0; l < s; ++l)
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        long long v;
        if (!(is >> v))
          throw ValidationError("matrices: expected " + std::to_string(s * m * m) + " digits, input ended early");
        if (v < 0 || v >= b) throw ValidationError("matrices: digit out of range [0,b)");
        g.at(l, r, c) = static_cast<int>(v);
      }
  std::string extra;
  if (is >> extra) throw ValidationError("matrices: trailing data after " + std::to_string(s) + " blocks");
  return g;
}

GeneratorMatrices load_matrices(const std::string& path, int b, int m, int s) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open '" + path + "'");
  return read_matrices(is, b, m, s);
}

NetCertificate verify_net(const PointSet& P, int t) {
  const int m = P.log_size();
  if (m < 0) throw ValidationError("verify_net: |P| is not a power of b");
  if (t < 0 || t > m) throw ValidationError("verify_net: need 0 <= t <= m");
  const int s = P.dim();
  const auto b = static_cast<std::uint64_t>(P.base());
  const std::uint64_t expected = ipow(b, t);
  NetCertificate cert{P.base(), m, s, t, true, std::nullopt, 0};
  std::vector<std::uint64_t> counts;
  for_each_composition(m - t, s, [&](const std::vector<int>& j) {
    if (!cert.verified) return;
    // Mixed-radix cell key with coordinate 0 most significant.
    std::vector<std::uint64_t> radix(s);
    std::vector<std::uint64_t> divisor(s);
    std::uint64_t cells = 1;
    for (int l = 0; l < s; ++l) {
      radix[l] = ipow(b, j[l]);
      cells *= radix[l];
      divisor[l] = j[l] <= P.precision() ? ipow(b, P.precision() - j[l]) : 0;
    }
    counts.assign(cells, 0);
    for (std::size_t n = 0; n < P.size(); ++n) {
      std::uint64_t key = 0;
      for (int l = 0; l < s; ++l) {
        const std::uint64_t num = P.numerator(n, l);
        const std::uint64_t k = divisor[l] ? num / divisor[l] : num * ipow(b, j[l] - P.precision());
        key = key * radix[l] + k;
      }
      ++counts[key];
    }
    // Counts sum to N, so any failing shape has an underfull cell; the
    // witness is the first one.
    for (std::uint64_t key = 0; key < cells; ++key) {
      if (counts[key] >= expected) continue;
      ElementaryInterval e{P.base(), j, std::vector<std::uint64_t>(s)};
      std::uint64_t v = key;
      for (int l = s - 1; l >= 0; --l) {
        e.k[l] = v % radix[l];
        v /= radix[l];
      }
      cert.verified = false;
      cert.witness = e;
      cert.witness_count = counts[key];
      return;
    }
  });
  return cert;
}

int t_value(const PointSet& P) {
  const int m = P.log_size();
  if (m < 0) throw ValidationError("t_value: |P| is not a power of b");
  for (int t = 0; t < m; ++t)
    if (verify_net(P, t).verified) return t;
  return m;
}

}  // namespace qmcwav
