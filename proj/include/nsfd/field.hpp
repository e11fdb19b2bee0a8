#pragma once

#include <array>
#include <memory>
#include <vector>

#include "nsfd/grid.hpp"

namespace nsfd {

enum class SumMode { Sequential, Compensated };

// Grid function with one real per grid point (boundary points included) and
// implicit zero extension: reads at lattice points outside the grid return 0.
class ScalarField {
 public:
  explicit ScalarField(std::shared_ptr<const GridDomain> g)
      : dom_(std::move(g)), v_(dom_->size(), 0.0) {}

  const GridDomain& dom() const { return *dom_; }
  const std::shared_ptr<const GridDomain>& domain_ptr() const { return dom_; }
  std::size_t size() const { return v_.size(); }

  double operator[](std::size_t i) const { return v_[i]; }
  double& operator[](std::size_t i) { return v_[i]; }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }

  // Value at x + dir*h*e^axis with zero extension.
  double nb(std::size_t i, int axis, int dir) const {
    std::int64_t j = dom_->neighbor(i, axis, dir);
    return j < 0 ? 0.0 : v_[static_cast<std::size_t>(j)];
  }
  // Value at an arbitrary lattice coordinate with zero extension.
  double at_coord(const Coord& c) const {
    std::int64_t j = dom_->find(c);
    return j < 0 ? 0.0 : v_[static_cast<std::size_t>(j)];
  }

 private:
  std::shared_ptr<const GridDomain> dom_;
  std::vector<double> v_;
};

class VectorField {
 public:
  explicit VectorField(std::shared_ptr<const GridDomain> g)
      : c_{ScalarField(g), ScalarField(g), ScalarField(g)} {}

  const GridDomain& dom() const { return c_[0].dom(); }
  const std::shared_ptr<const GridDomain>& domain_ptr() const { return c_[0].domain_ptr(); }

  ScalarField& comp(int i) { return c_[static_cast<std::size_t>(i)]; }
  const ScalarField& comp(int i) const { return c_[static_cast<std::size_t>(i)]; }

 private:
  std::array<ScalarField, 3> c_;
};

// Discrete derivatives with zero extension:
//   D_i^+ f(x) = (f(x+he^i) - f(x)) / h
//   D_i^- f(x) = (f(x) - f(x-he^i)) / h
//   D_i^2 f(x) = (f(x+he^i) + f(x-he^i) - 2 f(x)) / h^2
ScalarField dplus(const ScalarField& f, int axis);
ScalarField dminus(const ScalarField& f, int axis);
ScalarField d2(const ScalarField& f, int axis);
VectorField dplus(const VectorField& f, int axis);

// Discrete gradient (forward) and divergence (backward).
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& w);

// (u,w) = sum_x u(x).w(x) h^3, summed in point-index order. The compensated
// mode (Neumaier) exists for large grids and is off by default.
double inner(const ScalarField& u, const ScalarField& w, SumMode mode = SumMode::Sequential);
double inner(const VectorField& u, const VectorField& w, SumMode mode = SumMode::Sequential);
double norm(const ScalarField& u, SumMode mode = SumMode::Sequential);
double norm(const VectorField& u, SumMode mode = SumMode::Sequential);

double max_abs(const ScalarField& u);
double max_abs(const VectorField& u);
double max_abs_boundary(const ScalarField& u);
double max_abs_boundary(const VectorField& u);
// max over interior points of |D.w|.
double max_abs_divergence_interior(const VectorField& w);

// Defect of the summation-by-parts identity for w, phi vanishing on the
// discrete boundary:
//   sum_int w . Dphi h^3 + sum_int (D.w) phi h^3   (exactly 0 in real arithmetic)
// Throws BoundaryNotZero when the precondition fails.
double sbp_defect(const VectorField& w, const ScalarField& phi);

void require_same_domain(const GridDomain& a, const GridDomain& b, const char* what);
void require_axis(int axis);

}  // namespace nsfd
