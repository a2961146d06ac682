#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qmcwav/badic.hpp"
#include "qmcwav/exact.hpp"
#include "qmcwav/haar.hpp"

namespace qmcwav {

double qmc(const PointSet& P, const std::function<double(std::span<const double>)>& f);
double qmc(const PointSet& P, const PiecewiseConstantD& f);
mpq_class qmc(const PointSet& P, const PiecewiseConstantQ& f);

// Points of P grouped by the support cell E^{j-1}_k of the level-j wavelets.
// Levels beyond the point precision use zero-padded digits: the support index
// is the padded numerator and the child digit is 0.
class LevelHistogram {
 public:
  struct Group {
    std::vector<std::uint64_t> support;  // per coordinate; padded numerator when j_l - 1 > precision
    std::vector<std::int64_t> sums;      // sum over points of prod_l (b [child_l = i_l] - 1), over active i
  };

  LevelHistogram(const PointSet& P, std::vector<int> j);

  const std::vector<int>& j() const { return j_; }
  int active() const { return active_; }
  // Groups in ascending lexicographic order of support.
  const std::vector<Group>& groups() const { return groups_; }

  // Position of i (active coordinates only, coordinate order) in Group::sums.
  std::size_t offset(std::span<const int> i) const;

 private:
  std::vector<int> j_;
  int b_;
  int active_ = 0;
  std::vector<Group> groups_;
};

// Exact Q_P(Psi) by counting points per constancy cell.
RootScaled qmc_wavelet(const PointSet& P, const WaveletIndex& idx);

struct ExactnessReport {
  int L = 0;
  bool exact = true;
  RootScaled max_deviation;
  std::optional<WaveletIndex> witness;  // first index with nonzero deviation, level-major order
  RootScaled witness_deviation;
  std::uint64_t indices_checked = 0;
};

// max |Q_P(Psi) - I(Psi)| over all indices with |j| <= m - t.
ExactnessReport exactness_report(const PointSet& P, int t);

}  // namespace qmcwav
