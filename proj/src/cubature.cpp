#include "qmcwav/cubature.hpp"

#include <algorithm>
#include <numeric>

#include "qmcwav/errors.hpp"

namespace qmcwav {

double qmc(const PointSet& P, const std::function<double(std::span<const double>)>& f) {
  if (P.size() == 0) throw ValidationError("qmc: empty point set");
  std::vector<double> x(P.dim());
  double total = 0.0;
  for (std::size_t n = 0; n < P.size(); ++n) {
    for (int l = 0; l < P.dim(); ++l) x[l] = P.coordinate(n, l);
    total += f(x);
  }
  return total / static_cast<double>(P.size());
}

template <class T>
static T qmc_pc(const PointSet& P, const PiecewiseConstant<T>& f) {
  if (P.size() == 0) throw ValidationError("qmc: empty point set");
  if (P.base() != f.base() || P.dim() != f.dim()) throw ValidationError("qmc: base or dimension mismatch");
  T total(0);
  for (std::size_t n = 0; n < P.size(); ++n) total += f.at(P.point(n));
  return total / T(static_cast<double>(P.size()));
}

double qmc(const PointSet& P, const PiecewiseConstantD& f) { return qmc_pc(P, f); }

mpq_class qmc(const PointSet& P, const PiecewiseConstantQ& f) {
  if (P.size() == 0) throw ValidationError("qmc: empty point set");
  if (P.base() != f.base() || P.dim() != f.dim()) throw ValidationError("qmc: base or dimension mismatch");
  mpq_class total(0);
  for (std::size_t n = 0; n < P.size(); ++n) total += f.at(P.point(n));
  return total / mpq_class(static_cast<unsigned long>(P.size()));
}

namespace {

// Support index of a numerator at level j-1 (padded numerator beyond the
// precision) and the child digit at level j (0 beyond the precision).
struct Split {
  std::uint64_t support;
  int child;
};

Split split(std::uint64_t num, int precision, std::uint64_t b, int j) {
  if (j == 0) return {0, 0};
  Split r{};
  r.support = (j - 1 <= precision) ? num / ipow(b, precision - (j - 1)) : num;
  r.child = (j <= precision) ? static_cast<int>((num / ipow(b, precision - j)) % b) : 0;
  return r;
}

// Support value as stored by split() for a wavelet k; nullopt when no b-adic
// point of this precision can lie in the support.
std::optional<std::uint64_t> support_key(std::uint64_t k, int precision, std::uint64_t b, int j) {
  if (j == 0) return 0;
  if (j - 1 <= precision) return k;
  const std::uint64_t f = ipow(b, j - 1 - precision);
  if (k % f) return std::nullopt;
  return k / f;
}

std::uint64_t support_to_k(std::uint64_t support, int precision, std::uint64_t b, int j) {
  if (j == 0) return 0;
  if (j - 1 <= precision) return support;
  return support * ipow(b, j - 1 - precision);
}

// In place v -> b v - sum_axis v along each axis of a b^J tensor.
void apply_wavelet_transform(std::vector<std::int64_t>& v, int J, std::int64_t b) {
  std::size_t stride = 1;
  for (int a = 0; a < J; ++a) {
    const std::size_t block = stride * static_cast<std::size_t>(b);
    for (std::size_t base = 0; base < v.size(); base += block)
      for (std::size_t r = 0; r < stride; ++r) {
        std::int64_t sum = 0;
        for (std::int64_t c = 0; c < b; ++c) sum += v[base + r + c * stride];
        for (std::int64_t c = 0; c < b; ++c) v[base + r + c * stride] = b * v[base + r + c * stride] - sum;
      }
    stride = block;
  }
}

}  // namespace

LevelHistogram::LevelHistogram(const PointSet& P, std::vector<int> j) : j_(std::move(j)), b_(P.base()) {
  const int s = P.dim();
  if (static_cast<int>(j_.size()) != s) throw ValidationError("LevelHistogram: dimension mismatch");
  const auto b = static_cast<std::uint64_t>(b_);
  for (int v : j_) {
    if (v < 0) throw ValidationError("LevelHistogram: negative level");
    active_ += v > 0;
  }
  const std::size_t N = P.size();
  std::vector<std::uint64_t> support(N * s);
  std::vector<std::uint32_t> child(N, 0);
  for (std::size_t n = 0; n < N; ++n) {
    std::uint32_t c = 0;
    for (int l = 0; l < s; ++l) {
      const Split sp = split(P.numerator(n, l), P.precision(), b, j_[l]);
      support[n * s + l] = sp.support;
      if (j_[l] > 0) c = c * b_ + static_cast<std::uint32_t>(sp.child);
    }
    child[n] = c;
  }
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::lexicographical_compare(support.begin() + x * s, support.begin() + (x + 1) * s,
                                        support.begin() + y * s, support.begin() + (y + 1) * s);
  });
  const std::size_t tensor = ipow(b, active_);
  std::size_t start = 0;
  while (start < N) {
    std::size_t end = start + 1;
    auto same = [&](std::size_t x, std::size_t y) {
      return std::equal(support.begin() + x * s, support.begin() + (x + 1) * s, support.begin() + y * s);
    };
    while (end < N && same(order[start], order[end])) ++end;
    Group g;
    g.support.assign(support.begin() + order[start] * s, support.begin() + (order[start] + 1) * s);
    g.sums.assign(tensor, 0);
    for (std::size_t e = start; e < end; ++e) ++g.sums[child[order[e]]];
    apply_wavelet_transform(g.sums, active_, b_);
    groups_.push_back(std::move(g));
    start = end;
  }
}

std::size_t LevelHistogram::offset(std::span<const int> i) const {
  std::size_t o = 0;
  for (std::size_t l = 0; l < j_.size(); ++l)
    if (j_[l] > 0) o = o * static_cast<std::size_t>(b_) + static_cast<std::size_t>(i[l]);
  return o;
}

static RootScaled scaled_value(std::int64_t g, std::size_t N, int b, int J, int level) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(J));
  den *= static_cast<unsigned long>(N);
  return RootScaled(b, mpq_class(mpz_class(static_cast<long>(g)), den), level);
}

RootScaled qmc_wavelet(const PointSet& P, const WaveletIndex& idx) {
  if (idx.dim() != P.dim()) throw ValidationError("qmc_wavelet: dimension mismatch");
  idx.validate(P.base());
  if (P.size() == 0) throw ValidationError("qmc_wavelet: empty point set");
  const auto b = static_cast<std::uint64_t>(P.base());
  const int s = P.dim();
  std::vector<std::uint64_t> key(s);
  for (int l = 0; l < s; ++l) {
    auto k = support_key(idx.k[l], P.precision(), b, idx.j[l]);
    if (!k) return RootScaled(P.base(), 0);
    key[l] = *k;
  }
  std::int64_t g = 0;
  for (std::size_t n = 0; n < P.size(); ++n) {
    std::int64_t w = 1;
    for (int l = 0; l < s && w != 0; ++l) {
      if (idx.j[l] == 0) continue;
      const Split sp = split(P.numerator(n, l), P.precision(), b, idx.j[l]);
      if (sp.support != key[l])
        w = 0;
      else
        w *= sp.child == idx.i[l] ? static_cast<std::int64_t>(b) - 1 : -1;
    }
    g += w;
  }
  return scaled_value(g, P.size(), P.base(), idx.active(), idx.level());
}

ExactnessReport exactness_report(const PointSet& P, int t) {
  const int m = P.log_size();
  if (m < 0) throw ValidationError("exactness_report: |P| is not a power of b");
  if (t < 0 || t > m) throw ValidationError("exactness_report: need 0 <= t <= m");
  const int s = P.dim();
  const auto b = static_cast<std::uint64_t>(P.base());
  ExactnessReport rep;
  rep.L = m - t;
  rep.max_deviation = RootScaled(P.base(), 0);
  rep.witness_deviation = RootScaled(P.base(), 0);
  const RootScaled one(P.base(), 1);
  for (int L = 0; L <= rep.L; ++L) {
    rep.indices_checked += binomial(L + s - 1, s - 1) * ipow(b, L);
    for_each_composition(L, s, [&](const std::vector<int>& j) {
      LevelHistogram h(P, j);
      const int J = h.active();
      for (const auto& g : h.groups()) {
        for (std::size_t o = 0; o < g.sums.size(); ++o) {
          RootScaled dev = scaled_value(g.sums[o], P.size(), P.base(), J, L);
          if (L == 0) dev = dev - one;
          if (dev.is_zero()) continue;
          if (rep.exact) {
            rep.exact = false;
            WaveletIndex idx{j, std::vector<std::uint64_t>(s, 0), std::vector<int>(s, 0)};
            std::size_t v = o;
            for (int l = s - 1; l >= 0; --l) {
              if (j[l] == 0) continue;
              idx.i[l] = static_cast<int>(v % b);
              v /= b;
            }
            for (int l = 0; l < s; ++l) idx.k[l] = support_to_k(g.support[l], P.precision(), b, j[l]);
            rep.witness = idx;
            rep.witness_deviation = dev;
          }
          if (RootScaled::compare_abs(dev, rep.max_deviation) > 0) rep.max_deviation = dev;
        }
      }
    });
  }
  if (rep.max_deviation.rational() < 0) rep.max_deviation = -rep.max_deviation;
  return rep;
}

}  // namespace qmcwav
