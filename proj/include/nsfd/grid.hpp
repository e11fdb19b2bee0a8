#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "nsfd/geometry.hpp"

namespace nsfd {

// The discrete domain: lattice points x in Omega with C_{4h}(x) inside
// Omega, classified into interior and boundary. Boundary means some axis
// neighbor x +- h e^i is not itself a grid point. Points are stored in
// lexicographic order of their lattice coordinates so every derived index
// (and hence every matrix ordering downstream) is reproducible.
//
// Immutable after construction; concurrent reads are safe.
class GridDomain {
 public:
  static std::shared_ptr<const GridDomain> build(const DomainSpec& spec, double h);

  double h() const { return h_; }
  const DomainSpec& spec() const { return spec_; }

  std::size_t size() const { return coords_.size(); }
  std::size_t interior_count() const { return interior_points_.size(); }
  std::size_t boundary_count() const { return size() - interior_count(); }

  const Coord& coord(std::size_t i) const { return coords_[i]; }
  Point position(std::size_t i) const {
    const Coord& c = coords_[i];
    return {h_ * static_cast<double>(c[0]), h_ * static_cast<double>(c[1]),
            h_ * static_cast<double>(c[2])};
  }
  bool is_boundary(std::size_t i) const { return boundary_flag_[i] != 0; }

  // Lattice coordinate -> point index, or -1 when not in the grid.
  std::int64_t find(const Coord& c) const;
  // Index of x + dir*h*e^axis, or -1 when that lattice point is not in the grid.
  std::int64_t neighbor(std::size_t i, int axis, int dir) const {
    return neighbors_[i][static_cast<std::size_t>(2 * axis + (dir > 0 ? 1 : 0))];
  }

  // Dense labeling x^1..x^a of the interior points (lexicographic order).
  const std::vector<std::size_t>& interior_points() const { return interior_points_; }
  // Interior label of point i, or -1 when i is a boundary point.
  std::int64_t interior_index(std::size_t i) const { return interior_index_[i]; }

  // Lattice coordinate bounds over the stored points.
  const Coord& coord_min() const { return cmin_; }
  const Coord& coord_max() const { return cmax_; }

  // Whether the interior is edge-connected. The continuum domain is assumed
  // connected but the discrete set may still fragment at coarse h; this is
  // reported, not fatal.
  bool interior_connected() const { return connected_; }

 private:
  GridDomain() = default;

  double h_ = 0;
  DomainSpec spec_;
  std::vector<Coord> coords_;
  std::vector<std::uint8_t> boundary_flag_;
  std::vector<std::array<std::int64_t, 6>> neighbors_;
  std::vector<std::size_t> interior_points_;
  std::vector<std::int64_t> interior_index_;
  bool connected_ = true;

  // Dense lookup table over the lattice bounding box.
  Coord cmin_{0, 0, 0}, cmax_{-1, -1, -1};
  std::array<std::int64_t, 3> ext_{0, 0, 0};
  std::vector<std::int64_t> lookup_;
};

}  // namespace nsfd
