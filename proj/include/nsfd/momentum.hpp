#pragma once

#include "nsfd/field.hpp"

namespace nsfd {

struct MomentumOptions {
  double tol = 1e-10;        // relative linear residual
  int max_iter_factor = 20;  // iteration cap = factor * interior count
  double div_warn = 1e-8;    // warn threshold on max |D.u^n|
  bool force_dense = false;
};

// Interior-point linear map y -> y + tau*(C[u^n] y - L y) with C the averaged
// advection of the scheme and L = sum_j D_j^2, discretized with zero
// extension. The operator is identical for each velocity component, so one
// stencil serves three right-hand sides.
class MomentumSystem {
 public:
  MomentumSystem(VectorField u_n, double tau);

  const GridDomain& dom() const { return u_n_.dom(); }
  double tau() const { return tau_; }
  const VectorField& u_n() const { return u_n_; }

  // y and out indexed by interior label; one velocity component at a time.
  void apply(const std::vector<double>& y, std::vector<double>& out) const;

  double diag(std::size_t k) const { return diag_[k]; }
  double off(std::size_t k, std::size_t e) const { return off_[k][e]; }
  std::int64_t off_index(std::size_t k, std::size_t e) const { return nb_[k][e]; }

 private:
  VectorField u_n_;
  double tau_;
  std::vector<double> diag_;
  std::vector<std::array<double, 6>> off_;
  std::vector<std::array<std::int64_t, 6>> nb_;  // interior labels, -1 drops
};

MomentumSystem assemble(const VectorField& u_n, double tau);

struct MomentumSolve {
  VectorField u_half;
  int iterations = 0;
  double residual = 0;       // worst relative residual over the three components
  double max_div_un = 0;     // measured max |D.u^n| over the interior
  bool div_warning = false;  // exceeded the warn threshold; scheme still ran
  bool used_dense = false;
};

// Solve for u^{n+1/2} given the external force f^{n+1}; right-hand side is
// u^n + tau f^{n+1} at interior points. Iterative BiCGStab with a dense
// fallback for small interiors.
MomentumSolve solve(const MomentumSystem& sys, const VectorField& f,
                    const MomentumOptions& opt = {});

// Dense-factorization path, exposed as the oracle.
VectorField solve_dense(const MomentumSystem& sys, const VectorField& f);

struct EnergyTerms {
  double advection = 0;  // -sum_int (D.u^n)|u^{n+1/2}|^2 h^3
  double diffusion = 0;  // -sum_j ||D_j^+ u^{n+1/2}||^2
};

// Both terms evaluated two ways (raw double sum against the shifted closed
// form) with internal agreement enforced to roundoff.
EnergyTerms energy_identity_terms(const VectorField& u_n, const VectorField& u_half);

// Advection bilinear pairing (C[u_n] y, y): vanishes when D.u_n = 0.
// Returns the pairing and the absolute-value sum of its terms (the natural
// roundoff scale).
std::pair<double, double> advection_pairing(const VectorField& u_n, const VectorField& y);

}  // namespace nsfd
