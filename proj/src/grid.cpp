#include "nsfd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "nsfd/errors.hpp"

namespace nsfd {

std::shared_ptr<const GridDomain> GridDomain::build(const DomainSpec& spec, double h) {
  if (!(h > 0)) throw ConfigError("mesh size h must be positive");

  auto g = std::shared_ptr<GridDomain>(new GridDomain());
  g->h_ = h;
  g->spec_ = spec;

  // Scan the lattice bounding box for admissible points: x in Omega with the
  // closed cube C_{4h}(x) (side 4h, half-width 2h) inside the open domain.
  Box bb = spec.bounding_box();
  Coord lo, hi;
  for (int i = 0; i < 3; ++i) {
    lo[i] = static_cast<std::int64_t>(std::floor(bb.lo[i] / h)) - 1;
    hi[i] = static_cast<std::int64_t>(std::ceil(bb.hi[i] / h)) + 1;
  }
  const double half = 2.0 * h;
  for (std::int64_t cz = lo[2]; cz <= hi[2]; ++cz)
    for (std::int64_t cy = lo[1]; cy <= hi[1]; ++cy)
      for (std::int64_t cx = lo[0]; cx <= hi[0]; ++cx) {
        Point p{h * static_cast<double>(cx), h * static_cast<double>(cy),
                h * static_cast<double>(cz)};
        if (spec.contains(p) && spec.contains_closed_cube(p, half))
          g->coords_.push_back({cx, cy, cz});
      }
  // The triple loop above already emits lexicographic (z,y,x-major) order;
  // normalize to x-major lexicographic explicitly.
  std::sort(g->coords_.begin(), g->coords_.end());

  if (g->coords_.empty())
    throw EmptyGrid("no lattice point admits C_{4h}(x) inside the domain at h=" +
                    std::to_string(h));

  // Dense lattice lookup.
  g->cmin_ = g->coords_.front();
  g->cmax_ = g->coords_.front();
  for (const Coord& c : g->coords_)
    for (int i = 0; i < 3; ++i) {
      g->cmin_[i] = std::min(g->cmin_[i], c[i]);
      g->cmax_[i] = std::max(g->cmax_[i], c[i]);
    }
  for (int i = 0; i < 3; ++i) g->ext_[i] = g->cmax_[i] - g->cmin_[i] + 1;
  g->lookup_.assign(static_cast<std::size_t>(g->ext_[0] * g->ext_[1] * g->ext_[2]), -1);
  for (std::size_t i = 0; i < g->coords_.size(); ++i) {
    const Coord& c = g->coords_[i];
    std::size_t key = static_cast<std::size_t>(
        ((c[2] - g->cmin_[2]) * g->ext_[1] + (c[1] - g->cmin_[1])) * g->ext_[0] +
        (c[0] - g->cmin_[0]));
    g->lookup_[key] = static_cast<std::int64_t>(i);
  }

  // Neighbor table and boundary classification:
  // boundary(x) <=> some x +- h e^i is not a grid point.
  const std::size_t n = g->coords_.size();
  g->neighbors_.resize(n);
  g->boundary_flag_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    bool bnd = false;
    for (int axis = 0; axis < 3; ++axis)
      for (int dir : {-1, +1}) {
        Coord c = g->coords_[i];
        c[axis] += dir;
        std::int64_t j = g->find(c);
        g->neighbors_[i][static_cast<std::size_t>(2 * axis + (dir > 0 ? 1 : 0))] = j;
        if (j < 0) bnd = true;
      }
    g->boundary_flag_[i] = bnd ? 1 : 0;
  }

  g->interior_index_.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i)
    if (!g->boundary_flag_[i]) {
      g->interior_index_[i] = static_cast<std::int64_t>(g->interior_points_.size());
      g->interior_points_.push_back(i);
    }
  if (g->interior_points_.empty())
    throw EmptyGrid("grid has no interior points at h=" + std::to_string(h));

  // Edge-connectivity of the interior (reported only).
  {
    std::vector<std::uint8_t> seen(g->interior_points_.size(), 0);
    std::queue<std::size_t> q;
    q.push(g->interior_points_[0]);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!q.empty()) {
      std::size_t i = q.front();
      q.pop();
      for (int axis = 0; axis < 3; ++axis)
        for (int dir : {-1, +1}) {
          std::int64_t j = g->neighbor(i, axis, dir);
          if (j < 0) continue;
          std::int64_t k = g->interior_index_[static_cast<std::size_t>(j)];
          if (k < 0 || seen[static_cast<std::size_t>(k)]) continue;
          seen[static_cast<std::size_t>(k)] = 1;
          ++reached;
          q.push(static_cast<std::size_t>(j));
        }
    }
    g->connected_ = (reached == g->interior_points_.size());
  }

  return g;
}

std::int64_t GridDomain::find(const Coord& c) const {
  for (int i = 0; i < 3; ++i)
    if (c[i] < cmin_[i] || c[i] > cmax_[i]) return -1;
  std::size_t key = static_cast<std::size_t>(
      ((c[2] - cmin_[2]) * ext_[1] + (c[1] - cmin_[1])) * ext_[0] + (c[0] - cmin_[0]));
  return lookup_[key];
}

}  // namespace nsfd
