#pragma once

#include "nsfd/field.hpp"

namespace nsfd {

struct HodgeOptions {
  double tol = 1e-10;        // relative residual of the reduced Poisson solve
  int max_iter_factor = 10;  // iteration cap = factor * interior count
};

// The unique pair (w, phi) with D.w = 0 and w + Dphi = u on the interior,
// w = 0 and phi = 0 on the discrete boundary. Residuals are measured from
// the returned fields, not from solver estimates.
struct HodgeResult {
  VectorField w;
  ScalarField phi;
  struct {
    double max_div = 0;       // max over interior of |D.w|
    double max_recon = 0;     // max over interior of |w + Dphi - u|
    double max_bnd_w = 0;     // max |w| over the boundary (0 by construction)
    double max_bnd_phi = 0;   // max |phi| over the boundary (0 by construction)
  } residuals;
  int iterations = 0;
  double solver_residual = 0;
};

// Default backend: the coupled system reduced to a scalar Poisson problem for
// phi on the interior, solved by conjugate gradients on the (negated,
// positive definite) operator; then w := u - Dphi on the interior, 0 on the
// boundary. The reduction keeps w's zero boundary values in the backward
// differences, so it is the exact Schur complement of the coupled system.
HodgeResult decompose(const VectorField& u, const HodgeOptions& opt = {});

// Oracle backend: assemble the literal 4a x 4a linear system over the
// interior unknowns (w1, w2, w3, phi) and solve it by dense factorization.
// Guarded by 4a <= 4096.
HodgeResult decompose_dense(const VectorField& u);

// P_h u := w of the decomposition.
VectorField project(const VectorField& u, const HodgeOptions& opt = {});

}  // namespace nsfd
