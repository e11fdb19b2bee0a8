#include "nsfd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "nsfd/errors.hpp"

namespace nsfd {

namespace {

bool ball_contains(const Point& c, double r, const Point& p) {
  double d2 = 0;
  for (int i = 0; i < 3; ++i) d2 += (p[i] - c[i]) * (p[i] - c[i]);
  return d2 < r * r;
}

// Closed cube inside the open ball: the farthest corner decides, and by
// convexity the corner test is exact.
bool ball_contains_cube(const Point& c, double r, const Point& q, double half) {
  double d2 = 0;
  for (int i = 0; i < 3; ++i) {
    double d = std::abs(q[i] - c[i]) + half;
    d2 += d * d;
  }
  return d2 < r * r;
}

// Exact inclusion of a closed cube in the union of two open boxes. The two
// boxes partition the cube into an axis arrangement; membership in each open
// box is constant on every stratum of that arrangement, so testing one
// representative per stratum (breakpoints and midpoints between them) decides
// inclusion exactly.
bool union_contains_cube(const Box& a, const Box& b, const Point& q, double half) {
  std::array<std::vector<double>, 3> samples;
  for (int i = 0; i < 3; ++i) {
    double lo = q[i] - half, hi = q[i] + half;
    std::set<double> cuts{lo, hi};
    for (double v : {a.lo[i], a.hi[i], b.lo[i], b.hi[i]})
      if (v > lo && v < hi) cuts.insert(v);
    std::vector<double> pts(cuts.begin(), cuts.end());
    std::vector<double>& s = samples[i];
    for (std::size_t k = 0; k < pts.size(); ++k) {
      s.push_back(pts[k]);
      if (k + 1 < pts.size()) s.push_back(0.5 * (pts[k] + pts[k + 1]));
    }
  }
  for (double x : samples[0])
    for (double y : samples[1])
      for (double z : samples[2]) {
        Point p{x, y, z};
        if (!a.contains_open(p) && !b.contains_open(p)) return false;
      }
  return true;
}

}  // namespace

bool DomainSpec::contains(const Point& p) const {
  switch (kind) {
    case ShapeKind::Box:
      return box.contains_open(p);
    case ShapeKind::Ball:
      return ball_contains(ball_center, ball_radius, p);
    case ShapeKind::LShape:
      return box.contains_open(p) || box2.contains_open(p);
    case ShapeKind::Mask: {
      for (int i = 0; i < 3; ++i)
        if (p[i] <= mask.origin[i]) return false;
      std::int64_t i = static_cast<std::int64_t>(std::floor((p[0] - mask.origin[0]) / mask.voxel));
      std::int64_t j = static_cast<std::int64_t>(std::floor((p[1] - mask.origin[1]) / mask.voxel));
      std::int64_t k = static_cast<std::int64_t>(std::floor((p[2] - mask.origin[2]) / mask.voxel));
      return mask.occupied(i, j, k);
    }
  }
  return false;
}

bool DomainSpec::contains_closed_cube(const Point& c, double half) const {
  switch (kind) {
    case ShapeKind::Box:
      return box.contains_closed_cube(c, half);
    case ShapeKind::Ball:
      return ball_contains_cube(ball_center, ball_radius, c, half);
    case ShapeKind::LShape:
      if (box.contains_closed_cube(c, half) || box2.contains_closed_cube(c, half)) return true;
      return union_contains_cube(box, box2, c, half);
    case ShapeKind::Mask: {
      // Conservative: every voxel overlapping the cube must be occupied, and
      // the cube must sit strictly inside the masked region's voxel range.
      std::int64_t lo[3], hi[3];
      for (int i = 0; i < 3; ++i) {
        lo[i] = static_cast<std::int64_t>(std::floor((c[i] - half - mask.origin[i]) / mask.voxel));
        hi[i] = static_cast<std::int64_t>(std::floor((c[i] + half - mask.origin[i]) / mask.voxel));
      }
      for (std::int64_t k = lo[2]; k <= hi[2]; ++k)
        for (std::int64_t j = lo[1]; j <= hi[1]; ++j)
          for (std::int64_t i = lo[0]; i <= hi[0]; ++i)
            if (!mask.occupied(i, j, k)) return false;
      return true;
    }
  }
  return false;
}

double DomainSpec::x1_diameter() const {
  Box bb = bounding_box();
  return bb.hi[0] - bb.lo[0];
}

Box DomainSpec::bounding_box() const {
  switch (kind) {
    case ShapeKind::Box:
      return box;
    case ShapeKind::Ball: {
      Box b;
      for (int i = 0; i < 3; ++i) {
        b.lo[i] = ball_center[i] - ball_radius;
        b.hi[i] = ball_center[i] + ball_radius;
      }
      return b;
    }
    case ShapeKind::LShape: {
      Box b;
      for (int i = 0; i < 3; ++i) {
        b.lo[i] = std::min(box.lo[i], box2.lo[i]);
        b.hi[i] = std::max(box.hi[i], box2.hi[i]);
      }
      return b;
    }
    case ShapeKind::Mask: {
      Box b;
      for (int i = 0; i < 3; ++i) {
        b.lo[i] = mask.origin[i];
        b.hi[i] = mask.origin[i] + mask.voxel * static_cast<double>(mask.dims[i]);
      }
      return b;
    }
  }
  return {};
}

std::string DomainSpec::kind_name() const {
  switch (kind) {
    case ShapeKind::Box: return "box";
    case ShapeKind::Ball: return "ball";
    case ShapeKind::LShape: return "lshape";
    case ShapeKind::Mask: return "mask";
  }
  return "?";
}

Box cell(const Point& x, double h, CellVariant variant) {
  Box b;
  if (variant == CellVariant::Centered) {
    for (int i = 0; i < 3; ++i) {
      b.lo[i] = x[i] - 0.5 * h;
      b.hi[i] = x[i] + 0.5 * h;
    }
  } else {
    for (int i = 0; i < 3; ++i) {
      b.lo[i] = x[i];
      b.hi[i] = x[i] + h;
    }
  }
  return b;
}

}  // namespace nsfd
