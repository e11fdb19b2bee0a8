#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nsfd {

using Point = std::array<double, 3>;
using Coord = std::array<std::int64_t, 3>;  // lattice coordinates; position = h * coord

// Axis-aligned box. Half-open or closed depending on use site; the bounds
// themselves carry no openness.
struct Box {
  Point lo{0, 0, 0};
  Point hi{0, 0, 0};

  bool contains_open(const Point& p) const {
    for (int i = 0; i < 3; ++i)
      if (!(p[i] > lo[i] && p[i] < hi[i])) return false;
    return true;
  }
  // Closed box [c-half, c+half]^3 inside the open box.
  bool contains_closed_cube(const Point& c, double half) const {
    for (int i = 0; i < 3; ++i)
      if (!(c[i] - half > lo[i] && c[i] + half < hi[i])) return false;
    return true;
  }
  bool intersects_closed(const Box& other) const {
    for (int i = 0; i < 3; ++i)
      if (other.hi[i] < lo[i] || other.lo[i] > hi[i]) return false;
    return true;
  }
};

// Voxel occupancy mask with its own resolution, independent of the grid h.
struct VoxelMask {
  Point origin{0, 0, 0};
  double voxel = 1.0;
  std::array<std::int64_t, 3> dims{0, 0, 0};
  std::vector<std::uint8_t> occ;  // dims[0]*dims[1]*dims[2], x fastest

  bool occupied(std::int64_t i, std::int64_t j, std::int64_t k) const {
    if (i < 0 || j < 0 || k < 0 || i >= dims[0] || j >= dims[1] || k >= dims[2]) return false;
    return occ[static_cast<std::size_t>((k * dims[1] + j) * dims[0] + i)] != 0;
  }
};

enum class ShapeKind { Box, Ball, LShape, Mask };

// Geometric description of the continuum domain. Membership tests are pure
// and deterministic; cube-inclusion tests are exact for the analytic shapes
// (interval arithmetic on corners, farthest-corner distance for the ball)
// and conservative for voxel masks.
struct DomainSpec {
  ShapeKind kind = ShapeKind::Box;
  Box box;                 // Box, and first leg of LShape
  Box box2;                // second leg of LShape
  Point ball_center{0, 0, 0};
  double ball_radius = 1.0;
  VoxelMask mask;

  bool contains(const Point& p) const;
  // Closed cube [c-half, c+half]^3 contained in the open domain.
  bool contains_closed_cube(const Point& c, double half) const;
  // Extent of the domain in the x1 direction (the Poincare constant a).
  double x1_diameter() const;
  Box bounding_box() const;

  std::string kind_name() const;
};

enum class CellVariant { Centered, Shifted };

// C_h(x) = [x - h/2, x + h/2)^3 or C_h^+(x) = [x, x + h)^3.
Box cell(const Point& x, double h, CellVariant variant);

}  // namespace nsfd
