#pragma once

#include "nsfd/field.hpp"
#include "nsfd/stepper.hpp"

namespace nsfd {

enum class EmbedKind { U, V, Wi, F };

// Space-time step function over slab-cells [n tau, n tau + tau) x C_h^+(y):
// u_delta carries u^n, v_delta carries u^{n+1/2}, w^i_delta carries
// D_i^+ u^{n+1/2}, f_delta carries f^{n+1}. Values outside the slab-cells
// are zero; the final slab is truncated at T.
class EmbeddedField {
 public:
  EmbeddedField(EmbedKind kind, std::shared_ptr<const GridDomain> grid, double tau, double T,
                std::vector<VectorField> snaps, int axis = -1);

  static EmbeddedField build(const RunResult& run, EmbedKind kind, int axis = -1);

  EmbedKind kind() const { return kind_; }
  const GridDomain& grid() const { return *grid_; }
  const std::shared_ptr<const GridDomain>& grid_ptr() const { return grid_; }
  double tau() const { return tau_; }
  double T() const { return T_; }
  std::size_t slabs() const { return snaps_.size(); }
  const VectorField& snap(std::size_t n) const { return snaps_[n]; }
  // time measure of slab n inside [0, T]
  double slab_measure(std::size_t n) const;

  // value at (t, x); zero outside the covered slab-cells
  std::array<double, 3> value(double t, const Point& x) const;

  // exact squared L^2([0,T]; L^2) norm (finite re-association of the sums)
  double l2l2_norm_sq() const;

 private:
  EmbedKind kind_;
  std::shared_ptr<const GridDomain> grid_;
  double tau_, T_;
  std::vector<VectorField> snaps_;
};

// Exact L^2([0,T]; L^2) distance of two embedded step functions on dyadically
// aligned grids (h ratio a power of two; slab partitions merged exactly).
double l2_distance(const EmbeddedField& a, const EmbeddedField& b);

}  // namespace nsfd
