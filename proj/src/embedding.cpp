#include "nsfd/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "nsfd/errors.hpp"

namespace nsfd {

EmbeddedField::EmbeddedField(EmbedKind kind, std::shared_ptr<const GridDomain> grid, double tau,
                             double T, std::vector<VectorField> snaps, int axis)
    : kind_(kind), grid_(std::move(grid)), tau_(tau), T_(T), snaps_(std::move(snaps)) {
  (void)axis;
  if (snaps_.empty()) throw MissingSnapshots("embedded field needs at least one snapshot");
}

EmbeddedField EmbeddedField::build(const RunResult& run, EmbedKind kind, int axis) {
  if (!run.complete_states)
    throw MissingSnapshots("run was restarted mid-way; full state history unavailable");
  const double tail = run.config.T - run.tau * run.T_tau;  // measure of the partial last slab
  std::vector<VectorField> snaps;
  switch (kind) {
    case EmbedKind::U:
      snaps = run.u;  // u^0 .. u^{T_tau}; the last one covers [tau T_tau, T)
      break;
    case EmbedKind::V:
    case EmbedKind::Wi: {
      if (tail > 1e-12 * run.config.T)
        throw MissingSnapshots(
            "T is not slab-aligned and u^{T_tau+1/2} is outside the scheme's recurrence");
      if (kind == EmbedKind::V) {
        snaps = run.u_half;
      } else {
        require_axis(axis);
        snaps.reserve(run.u_half.size());
        for (const VectorField& uh : run.u_half) snaps.push_back(dplus(uh, axis));
      }
      break;
    }
    case EmbedKind::F:
      if (tail > 1e-12 * run.config.T)
        throw MissingSnapshots("T is not slab-aligned; f^{T_tau+1} was not ingested");
      snaps = run.force;
      break;
  }
  if (snaps.empty()) throw MissingSnapshots("run has no steps to embed");
  return EmbeddedField(kind, run.grid, run.tau, run.config.T, std::move(snaps), axis);
}

double EmbeddedField::slab_measure(std::size_t n) const {
  double lo = tau_ * static_cast<double>(n);
  double hi = std::min(tau_ * static_cast<double>(n + 1), T_);
  return std::max(0.0, hi - lo);
}

std::array<double, 3> EmbeddedField::value(double t, const Point& x) const {
  if (t < 0 || t > T_) return {0, 0, 0};
  std::size_t n = static_cast<std::size_t>(std::min(
      static_cast<double>(snaps_.size() - 1), std::floor(t / tau_)));
  Coord c;
  for (int i = 0; i < 3; ++i)
    c[i] = static_cast<std::int64_t>(std::floor(x[i] / grid_->h()));
  std::int64_t idx = grid_->find(c);
  if (idx < 0) return {0, 0, 0};
  std::size_t ii = static_cast<std::size_t>(idx);
  const VectorField& s = snaps_[n];
  return {s.comp(0)[ii], s.comp(1)[ii], s.comp(2)[ii]};
}

double EmbeddedField::l2l2_norm_sq() const {
  double total = 0;
  for (std::size_t n = 0; n < snaps_.size(); ++n) {
    double m = slab_measure(n);
    if (m == 0) continue;
    total += m * inner(snaps_[n], snaps_[n]);
  }
  return total;
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

int dyadic_ratio(double coarse_h, double fine_h) {
  double r = coarse_h / fine_h;
  int k = static_cast<int>(std::lround(std::log2(r)));
  if (k < 0 || std::abs(r - std::ldexp(1.0, k)) > 1e-9 * r)
    throw GridsNotAligned("mesh sizes " + std::to_string(coarse_h) + " and " +
                          std::to_string(fine_h) + " are not dyadically aligned");
  return k;
}

}  // namespace

double l2_distance(const EmbeddedField& a, const EmbeddedField& b) {
  if (std::abs(a.T() - b.T()) > 1e-12 * std::max(a.T(), b.T()))
    throw GridsNotAligned("embedded fields have different final times");
  const double T = a.T();

  // Spatial setup: every coarse cell is tiled exactly by fine lattice cells.
  const bool a_fine = a.grid().h() <= b.grid().h();
  const EmbeddedField& fine = a_fine ? a : b;
  const EmbeddedField& coarse = a_fine ? b : a;
  const int k = dyadic_ratio(coarse.grid().h(), fine.grid().h());
  const std::int64_t ratio = static_cast<std::int64_t>(1) << k;

  Coord lo, hi;
  for (int i = 0; i < 3; ++i) {
    lo[i] = std::min(fine.grid().coord_min()[i], coarse.grid().coord_min()[i] * ratio);
    hi[i] = std::max(fine.grid().coord_max()[i], (coarse.grid().coord_max()[i] + 1) * ratio - 1);
  }
  const double h3 = std::pow(fine.grid().h(), 3);

  // Cells where at least one field is nonzero, with both indices resolved.
  struct Pair {
    std::int64_t fine_idx, coarse_idx;
  };
  std::vector<Pair> cells;
  for (std::int64_t z = lo[2]; z <= hi[2]; ++z)
    for (std::int64_t y = lo[1]; y <= hi[1]; ++y)
      for (std::int64_t x = lo[0]; x <= hi[0]; ++x) {
        std::int64_t fi = fine.grid().find({x, y, z});
        std::int64_t ci =
            coarse.grid().find({floor_div(x, ratio), floor_div(y, ratio), floor_div(z, ratio)});
        if (fi >= 0 || ci >= 0) cells.push_back({fi, ci});
      }

  // Merged slab breakpoints of both partitions, cut at T.
  std::vector<double> cuts{0.0, T};
  for (const EmbeddedField* e : {&a, &b})
    for (std::size_t n = 1; n < e->slabs() + 1; ++n) {
      double t = e->tau() * static_cast<double>(n);
      if (t < T) cuts.push_back(t);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [&](double p, double q) { return std::abs(p - q) <= 1e-12 * T; }),
             cuts.end());

  double total = 0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    double t0 = cuts[s], t1 = cuts[s + 1];
    double mid = 0.5 * (t0 + t1);
    auto slab_of = [&](const EmbeddedField& e) {
      return std::min(e.slabs() - 1, static_cast<std::size_t>(std::floor(mid / e.tau())));
    };
    const VectorField& sf = fine.snap(slab_of(fine));
    const VectorField& sc = coarse.snap(slab_of(coarse));
    const double sgn = a_fine ? 1.0 : -1.0;  // distance is symmetric; kept for clarity
    (void)sgn;
    double space = 0;
    for (const Pair& p : cells) {
      for (int c = 0; c < 3; ++c) {
        double vf = p.fine_idx < 0 ? 0.0 : sf.comp(c)[static_cast<std::size_t>(p.fine_idx)];
        double vc = p.coarse_idx < 0 ? 0.0 : sc.comp(c)[static_cast<std::size_t>(p.coarse_idx)];
        double d = vf - vc;
        space += d * d;
      }
    }
    total += (t1 - t0) * space * h3;
  }
  return std::sqrt(total);
}

}  // namespace nsfd
