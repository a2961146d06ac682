#include <algorithm>
#include <cmath>
#include <memory>

#include "frac_internal.hpp"
#include "qmcwav/errors.hpp"
#include "qmcwav/fractional.hpp"
#include "qmcwav/simd.hpp"

namespace qmcwav {

namespace {

std::vector<double> grid_breakpoints(const std::vector<double>& coords, int K, int G) {
  std::vector<double> b;
  for (int i = 0; i <= K; ++i) b.push_back(static_cast<double>(i) / K);
  for (double x : coords) {
    b.push_back(x);
    for (int g = 1; g <= G; ++g) {
      const double y = x - std::ldexp(1.0, -g);
      if (y > 0.0) b.push_back(y);
    }
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

// Cell integrals along one coordinate: A[c] of alpha^{-1}(1-t)^alpha and, cell
// major, G[c*N + n] of (x_n - t)_+^{alpha-1}.
struct AxisCells {
  std::vector<double> bp, width, A, G;
};

AxisCells axis_cells(const std::vector<double>& coords, double alpha, int K, int G) {
  const simd::Kernels& k = simd::active();
  AxisCells ax;
  ax.bp = grid_breakpoints(coords, K, G);
  const std::size_t C = ax.bp.size() - 1, N = coords.size();
  ax.width.resize(C);
  ax.A.resize(C);
  ax.G.resize(C * N);
  std::vector<double> pa(N), pb(N);
  k.shifted_power(coords.data(), N, ax.bp[0], alpha, pa.data());
  for (std::size_t c = 0; c < C; ++c) {
    const double a = ax.bp[c], b = ax.bp[c + 1];
    ax.width[c] = b - a;
    ax.A[c] = (std::pow(1.0 - a, alpha + 1.0) - std::pow(1.0 - b, alpha + 1.0)) / (alpha * (alpha + 1.0));
    k.shifted_power(coords.data(), N, b, alpha, pb.data());
    for (std::size_t n = 0; n < N; ++n) ax.G[c * N + n] = (pa[n] - pb[n]) / alpha;
    std::swap(pa, pb);
  }
  return ax;
}

struct SubsetGrid {
  std::vector<int> dims;
  std::vector<std::size_t> shape;
  std::vector<double> I_first;  // cell integrals of the product term
  std::vector<double> I_points; // cell integrals of the point term, already / N
  std::vector<double> vol;
};

SubsetGrid subset_grid(Subset u, const std::vector<AxisCells>& axes, std::size_t N) {
  const simd::Kernels& k = simd::active();
  SubsetGrid sg;
  sg.dims = detail::subset_dims(u);
  const int d = static_cast<int>(sg.dims.size());
  std::size_t total = 1;
  for (int l : sg.dims) {
    sg.shape.push_back(axes[l].width.size());
    total *= axes[l].width.size();
  }
  sg.I_first.resize(total);
  sg.I_points.resize(total);
  sg.vol.resize(total);
  const double invN = 1.0 / static_cast<double>(N);
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> h(N);
  for (std::size_t cell = 0; cell < total; ++cell) {
    double first = 1.0, vol = 1.0;
    for (int a = 0; a < d; ++a) {
      first *= axes[sg.dims[a]].A[idx[a]];
      vol *= axes[sg.dims[a]].width[idx[a]];
    }
    double pts;
    const double* g0 = axes[sg.dims[0]].G.data() + idx[0] * N;
    if (d == 1) {
      pts = 0.0;
      for (std::size_t n = 0; n < N; ++n) pts += g0[n];
    } else if (d == 2) {
      pts = k.dot(g0, axes[sg.dims[1]].G.data() + idx[1] * N, N);
    } else {
      k.mul(g0, axes[sg.dims[1]].G.data() + idx[1] * N, h.data(), N);
      pts = k.dot(h.data(), axes[sg.dims[2]].G.data() + idx[2] * N, N);
    }
    sg.I_first[cell] = first;
    sg.I_points[cell] = pts * invN;
    sg.vol[cell] = vol;
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < sg.shape[a]) break;
      idx[a] = 0;
    }
  }
  return sg;
}

}  // namespace

ExtremalResult extremal_function(const PointSet& P, double alpha, const Exponent& p, const Exponent& q,
                                 const ExtremalGrid& grid) {
  if (P.size() == 0) throw ValidationError("extremal_function: empty point set");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("extremal_function: alpha must lie in (0,1]");
  if (p.is_infinite() || !(p.value() * alpha > 1.0))
    throw ValidationError("extremal_function: need p in (1/alpha, inf)");
  if (grid.K < 1) throw ValidationError("extremal_function: need K >= 1");
  const int s = P.dim();
  if (s > 3) throw ValidationError("extremal_function: s <= 3 supported");
  const int G = grid.G >= 0 ? grid.G : static_cast<int>(std::ceil(3.0 * std::log2(static_cast<double>(grid.K))));
  const Exponent pprime = p.conjugate(), qprime = q.conjugate();
  const double pp = pprime.value(), pv = p.value();
  const std::size_t N = P.size();
  const auto x = P.coordinates_by_dim();

  std::vector<AxisCells> axes;
  for (int l = 0; l < s; ++l) axes.push_back(axis_cells(x[l], alpha, grid.K, G));

  const double gamma = std::tgamma(alpha);
  ExtremalResult res;
  res.f = FracFunction(alpha, s);
  struct Piece {
    Subset u;
    SubsetGrid sg;
    std::vector<double> sign_pow;  // sign(avg)|avg|^{p'-1}
    double d = 0.0;                // sum vol |avg|^{p'}
  };
  std::vector<Piece> pieces;
  for (Subset u = 1; u < (Subset{1} << s); ++u) {
    Piece pc{u, subset_grid(u, axes, N), {}, 0.0};
    const std::size_t C = pc.sg.vol.size();
    res.cells += C;
    pc.sign_pow.resize(C);
    std::vector<double> terms(C);
    for (std::size_t c = 0; c < C; ++c) {
      const double avg = (pc.sg.I_first[c] - pc.sg.I_points[c]) / pc.sg.vol[c];
      pc.sign_pow[c] = std::copysign(std::pow(std::abs(avg), pp - 1.0), avg);
      terms[c] = pc.sg.vol[c] * std::pow(std::abs(avg), pp);
    }
    pc.d = detail::pairwise_sum(terms.data(), C);
    pieces.push_back(std::move(pc));
  }

  // Weights a_u realise equality in the l_q / l_q' Hoelder step.
  std::vector<double> a(pieces.size(), 0.0);
  if (qprime.is_infinite()) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < pieces.size(); ++k)
      if (pieces[k].d > pieces[best].d) best = k;
    a[best] = 1.0;
  } else {
    for (std::size_t k = 0; k < pieces.size(); ++k) a[k] = std::pow(pieces[k].d, (qprime.value() - 1.0) / pp);
  }

  std::vector<double> norms;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    Piece& pc = pieces[k];
    const int du = subset_size(pc.u);
    const double gnorm = std::pow(pc.d, 1.0 / pv);  // ||sign|avg|^{p'-1}||_p
    const double c_u = (gnorm > 0.0 && a[k] > 0.0) ? std::pow(gamma, du) * a[k] / gnorm : 0.0;
    const double scale = std::pow(gamma, -du) * c_u;
    std::vector<double> ti(pc.sign_pow.size()), tq(pc.sign_pow.size());
    for (std::size_t c = 0; c < pc.sign_pow.size(); ++c) {
      ti[c] = pc.sign_pow[c] * pc.sg.I_first[c];
      tq[c] = pc.sign_pow[c] * pc.sg.I_points[c];
    }
    res.integral += scale * detail::pairwise_sum(ti.data(), ti.size());
    res.cubature += scale * detail::pairwise_sum(tq.data(), tq.size());
    norms.push_back(scale * gnorm);

    auto values = std::make_shared<std::vector<double>>(pc.sign_pow.size());
    for (std::size_t c = 0; c < values->size(); ++c) (*values)[c] = c_u * pc.sign_pow[c];
    auto bps = std::make_shared<std::vector<std::vector<double>>>();
    for (int l : pc.sg.dims) bps->push_back(axes[l].bp);
    res.f.set_density(pc.u, [values, bps](std::span<const double> t) {
      std::size_t cell = 0;
      for (std::size_t a2 = 0; a2 < bps->size(); ++a2) {
        const auto& b = (*bps)[a2];
        auto it = std::upper_bound(b.begin(), b.end(), t[a2]);
        std::size_t c = static_cast<std::size_t>(it - b.begin());
        c = std::min<std::size_t>(std::max<std::size_t>(c, 1), b.size() - 1) - 1;
        cell = cell * (b.size() - 1) + c;
      }
      return (*values)[cell];
    });
  }
  double acc = 0.0;
  for (double nv : norms) acc = q.is_infinite() ? std::max(acc, nv) : acc + std::pow(nv, q.value());
  res.norm = q.is_infinite() ? acc : std::pow(acc, 1.0 / q.value());

  if (pprime == Exponent(2.0) && qprime == Exponent(2.0) && alpha > 0.5)
    res.discrepancy = frac_discrepancy(P, alpha, pprime, qprime, DiscMethod::warnock).value;
  else
    res.discrepancy = frac_discrepancy(P, alpha, pprime, qprime, DiscMethod::tensor_quad).value;
  const double denom = res.discrepancy * res.norm;
  res.ratio = denom > 0.0 ? std::abs(res.integral - res.cubature) / denom : 0.0;
  return res;
}

}  // namespace qmcwav
