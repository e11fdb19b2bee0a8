#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nsfd/analytic.hpp"
#include "nsfd/field.hpp"

namespace nsfd {

// Analytic divergence-free C^4 vector field with compact support, built as
// the curl of a polynomial bump potential and normalized to unit W^{4,inf}
// norm (max over components and multi-indices |alpha| <= 4 of sup |d^a phi|,
// measured by dense sampling). Optionally carries a temporal cutoff theta(t)
// for the time-dependent weak form; spatial-only uses ignore it.
struct TestFunction {
  std::string name;
  SepVector phi;
  Box support;
  Envelope theta = Envelope::one();
  double w4inf = 1.0;  // measured norm after normalization

  double value(int comp, const Point& x) const { return phi[comp].eval(x); }
  double d1(int comp, int axis, const Point& x) const;
  double d2_same(int comp, int axis, const Point& x) const;
  double eval_partial(int comp, const std::array<int, 3>& order, const Point& x) const {
    return phi[comp].eval_partial(order, x);
  }
  // sup over the support of |grad phi| (Frobenius over components), dense scan.
  double max_grad(int samples_per_axis = 64) const;
};

// Scalar compact-support C^4 test function (one component of a dictionary
// member), used by the asymptotic-divergence bound.
struct ScalarTestFunction {
  std::string name;
  SepScalar f;
  Box support;
  double value(const Point& x) const { return f.eval(x); }
  double d1(int axis, const Point& x) const;
  double max_grad(int samples_per_axis = 64) const;
};

// Dense-sampled W^{4,inf} norm of a separable polynomial vector field.
double w4inf_norm(const SepVector& phi, const Box& support, int samples_per_axis = 64);

// The shipped dictionary: eight curls of scaled/translated product bump
// potentials, supports inside [0.26, 0.74]^3 of the unit box, unit W^{4,inf}.
const std::vector<TestFunction>& dictionary();
const TestFunction& dictionary_member(const std::string& name);

// Nonzero scalar components of a member, for scalar pairings.
std::vector<ScalarTestFunction> scalar_components(const TestFunction& tf);

// Attach the temporal cutoff used by the weak form: a C^5 polynomial bump
// supported on [-T/2, 9T/10], so theta(0) != 0 and theta == 0 near t = T.
TestFunction with_time_cutoff(const TestFunction& tf, double T);

// Samples at grid points.
VectorField sample_on_grid(const TestFunction& tf, std::shared_ptr<const GridDomain> g);
ScalarField sample_on_grid(const ScalarTestFunction& tf, std::shared_ptr<const GridDomain> g);

// phi == 0 on C_{2h}(y) for every boundary point y: the boundary-collar
// admissibility shared by the op-norm pairing, the divergence bound and the
// weak form. Exact box-disjointness test against the support.
bool support_clear_of_collar(const Box& support, const GridDomain& g);

}  // namespace nsfd
