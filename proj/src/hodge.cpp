#include "nsfd/hodge.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "nsfd/errors.hpp"
#include "nsfd/solvers.hpp"

namespace nsfd {

namespace {

// Populate residual certificates from the fields themselves.
void measure_residuals(const VectorField& u, HodgeResult& r) {
  const GridDomain& g = u.dom();
  const double inv_h = 1.0 / g.h();
  double max_div = 0, max_recon = 0;
  for (std::size_t i : g.interior_points()) {
    double div = 0;
    for (int a = 0; a < 3; ++a)
      div += (r.w.comp(a)[i] - r.w.comp(a).nb(i, a, -1)) * inv_h;
    max_div = std::max(max_div, std::abs(div));
    for (int a = 0; a < 3; ++a) {
      double dphi = (r.phi.nb(i, a, +1) - r.phi[i]) * inv_h;
      max_recon = std::max(max_recon, std::abs(r.w.comp(a)[i] + dphi - u.comp(a)[i]));
    }
  }
  r.residuals.max_div = max_div;
  r.residuals.max_recon = max_recon;
  r.residuals.max_bnd_w = max_abs_boundary(r.w);
  r.residuals.max_bnd_phi = max_abs_boundary(r.phi);
}

// Assemble w from phi: w = u - Dphi on the interior, 0 on the boundary.
void recover_w(const VectorField& u, HodgeResult& r) {
  const GridDomain& g = u.dom();
  const double inv_h = 1.0 / g.h();
  for (std::size_t i : g.interior_points())
    for (int a = 0; a < 3; ++a)
      r.w.comp(a)[i] = u.comp(a)[i] - (r.phi.nb(i, a, +1) - r.phi[i]) * inv_h;
}

}  // namespace

HodgeResult decompose(const VectorField& u, const HodgeOptions& opt) {
  const GridDomain& g = u.dom();
  const auto& interior = g.interior_points();
  const std::size_t a = interior.size();
  const double inv_h = 1.0 / g.h();

  // Schur complement of the coupled system, scaled by h^2: for interior x,
  //   sum_j [ (phi(x) - phi(x+he^j)) + m_j (phi(x) - phi(x-he^j)) ] = -h^2 D.(chi_I u)(x)
  // where m_j = 1 iff x - he^j is interior, and phi reads as 0 outside the
  // interior. Backward terms with m_j = 0 drop entirely: they stand for w's
  // zero boundary value, not for phi's zero extension.
  struct Stencil {
    double diag;
    std::array<std::int64_t, 6> nb;  // interior labels, -1 drops
  };
  std::vector<Stencil> rows(a);
  std::vector<double> b(a);
  for (std::size_t k = 0; k < a; ++k) {
    std::size_t i = interior[k];
    Stencil st;
    st.diag = 0;
    double rhs = 0;
    for (int axis = 0; axis < 3; ++axis) {
      std::int64_t jp = g.neighbor(i, axis, +1);
      std::int64_t jm = g.neighbor(i, axis, -1);
      std::int64_t kp = jp < 0 ? -1 : g.interior_index(static_cast<std::size_t>(jp));
      std::int64_t km = jm < 0 ? -1 : g.interior_index(static_cast<std::size_t>(jm));
      st.diag += 1.0;
      st.nb[static_cast<std::size_t>(2 * axis + 1)] = kp;
      st.nb[static_cast<std::size_t>(2 * axis)] = -1;
      rhs += u.comp(axis)[i];
      if (km >= 0) {
        st.diag += 1.0;
        st.nb[static_cast<std::size_t>(2 * axis)] = km;
        rhs -= u.comp(axis)[static_cast<std::size_t>(jm)];
      }
    }
    rows[k] = st;
    b[k] = -g.h() * rhs;  // -h^2 * (1/h) * (masked divergence sums)
  }

  ApplyFn apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t k = 0; k < a; ++k) {
      const Stencil& st = rows[k];
      double s = st.diag * x[k];
      for (std::size_t e = 0; e < 6; ++e)
        if (st.nb[e] >= 0) s -= x[static_cast<std::size_t>(st.nb[e])];
      y[k] = s;
    }
  };

  std::vector<double> phi_int;
  KrylovResult kr = cg(apply, b, phi_int, opt.tol,
                       std::max(64, opt.max_iter_factor * static_cast<int>(a)));
  if (!kr.converged)
    throw SolverDiverged("hodge: CG failed to reach tol=" + std::to_string(opt.tol) +
                         " after " + std::to_string(kr.iterations) + " iterations");

  HodgeResult res{VectorField(u.domain_ptr()), ScalarField(u.domain_ptr()), {}, 0, 0};
  for (std::size_t k = 0; k < a; ++k) res.phi[interior[k]] = phi_int[k];
  recover_w(u, res);
  res.iterations = kr.iterations;
  res.solver_residual = kr.relative_residual;
  measure_residuals(u, res);
  (void)inv_h;
  return res;
}

HodgeResult decompose_dense(const VectorField& u) {
  const GridDomain& g = u.dom();
  const auto& interior = g.interior_points();
  const std::size_t a = interior.size();
  if (4 * a > 4096)
    throw TooLargeForDense("dense Hodge backend limited to 4a <= 4096, got a=" +
                           std::to_string(a));

  // Unknown layout follows the constructive labeling:
  //   y = (w1(x^1..x^a), w2(..), w3(..), phi(x^1..x^a)).
  // Rows 0..a-1:      D.w(x^k) = 0
  // Rows a..4a-1:     w_i(x^k) + D_i^+ phi(x^k) = u_i(x^k)
  const std::size_t n = 4 * a;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  const double inv_h = 1.0 / g.h();
  auto W = [&](int comp, std::size_t k) {
    return static_cast<Eigen::Index>(static_cast<std::size_t>(comp) * a + k);
  };
  auto PHI = [&](std::size_t k) { return static_cast<Eigen::Index>(3 * a + k); };

  for (std::size_t k = 0; k < a; ++k) {
    std::size_t i = interior[k];
    Eigen::Index row_div = static_cast<Eigen::Index>(k);
    for (int axis = 0; axis < 3; ++axis) {
      A(row_div, W(axis, k)) += inv_h;
      std::int64_t jm = g.neighbor(i, axis, -1);
      std::int64_t km = jm < 0 ? -1 : g.interior_index(static_cast<std::size_t>(jm));
      if (km >= 0) A(row_div, W(axis, static_cast<std::size_t>(km))) -= inv_h;

      Eigen::Index row_c = static_cast<Eigen::Index>((static_cast<std::size_t>(axis) + 1) * a + k);
      A(row_c, W(axis, k)) += 1.0;
      A(row_c, PHI(k)) -= inv_h;
      std::int64_t jp = g.neighbor(i, axis, +1);
      std::int64_t kp = jp < 0 ? -1 : g.interior_index(static_cast<std::size_t>(jp));
      if (kp >= 0) A(row_c, PHI(static_cast<std::size_t>(kp))) += inv_h;
      rhs(row_c) = u.comp(axis)[i];
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::VectorXd y = lu.solve(rhs);
  double rel = (A * y - rhs).norm() / std::max(rhs.norm(), 1e-300);
  if (!y.allFinite() || rel > 1e-8)
    throw SingularMatrix("dense Hodge system did not solve cleanly (relative residual " +
                         std::to_string(rel) + "); this contradicts invertibility and signals a bug");

  HodgeResult res{VectorField(u.domain_ptr()), ScalarField(u.domain_ptr()), {}, 0, rel};
  for (std::size_t k = 0; k < a; ++k) {
    std::size_t i = interior[k];
    for (int c = 0; c < 3; ++c) res.w.comp(c)[i] = y(W(c, k));
    res.phi[i] = y(PHI(k));
  }
  measure_residuals(u, res);
  return res;
}

VectorField project(const VectorField& u, const HodgeOptions& opt) {
  return decompose(u, opt).w;
}

}  // namespace nsfd
