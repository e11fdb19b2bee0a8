#include "nsfd/momentum.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "nsfd/errors.hpp"
#include "nsfd/solvers.hpp"

namespace nsfd {

MomentumSystem::MomentumSystem(VectorField u_n, double tau)
    : u_n_(std::move(u_n)), tau_(tau) {
  if (!(tau_ > 0)) throw NonpositiveTau("time step must be positive");
  if (max_abs_boundary(u_n_) != 0.0)
    throw BoundaryNotZero("momentum: u^n does not vanish on the discrete boundary");

  const GridDomain& g = u_n_.dom();
  const auto& interior = g.interior_points();
  const std::size_t a = interior.size();
  const double h = g.h();
  const double adv = 0.5 * tau_ / h;   // tau/2 * 1/h
  const double dif = tau_ / (h * h);   // tau * 1/h^2

  diag_.assign(a, 0.0);
  off_.assign(a, {});
  nb_.assign(a, {});
  for (std::size_t k = 0; k < a; ++k) {
    std::size_t i = interior[k];
    double d = 1.0;
    for (int axis = 0; axis < 3; ++axis) {
      // x interior, so x +- h e^axis are grid points; their values may be
      // constrained to zero (boundary) in which case the column drops.
      double un_here = u_n_.comp(axis)[i];
      double un_back = u_n_.comp(axis).nb(i, axis, -1);
      d += adv * (un_back - un_here) + 2.0 * dif;

      std::int64_t jp = g.neighbor(i, axis, +1);
      std::int64_t jm = g.neighbor(i, axis, -1);
      std::int64_t kp = jp < 0 ? -1 : g.interior_index(static_cast<std::size_t>(jp));
      std::int64_t km = jm < 0 ? -1 : g.interior_index(static_cast<std::size_t>(jm));
      nb_[k][static_cast<std::size_t>(2 * axis + 1)] = kp;
      nb_[k][static_cast<std::size_t>(2 * axis)] = km;
      off_[k][static_cast<std::size_t>(2 * axis + 1)] = adv * un_here - dif;
      off_[k][static_cast<std::size_t>(2 * axis)] = -adv * un_back - dif;
    }
    diag_[k] = d;
  }
}

void MomentumSystem::apply(const std::vector<double>& y, std::vector<double>& out) const {
  const std::size_t a = diag_.size();
  for (std::size_t k = 0; k < a; ++k) {
    double s = diag_[k] * y[k];
    for (std::size_t e = 0; e < 6; ++e)
      if (nb_[k][e] >= 0) s += off_[k][e] * y[static_cast<std::size_t>(nb_[k][e])];
    out[k] = s;
  }
}

MomentumSystem assemble(const VectorField& u_n, double tau) { return {u_n, tau}; }

namespace {

VectorField to_field(const MomentumSystem& sys, const std::array<std::vector<double>, 3>& y) {
  VectorField u(sys.u_n().domain_ptr());
  const auto& interior = sys.dom().interior_points();
  for (int c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < interior.size(); ++k)
      u.comp(c)[interior[k]] = y[static_cast<std::size_t>(c)][k];
  return u;
}

std::vector<double> rhs_component(const MomentumSystem& sys, const VectorField& f, int c) {
  const auto& interior = sys.dom().interior_points();
  std::vector<double> b(interior.size());
  for (std::size_t k = 0; k < interior.size(); ++k) {
    std::size_t i = interior[k];
    b[k] = sys.u_n().comp(c)[i] + sys.tau() * f.comp(c)[i];
  }
  return b;
}

Eigen::PartialPivLU<Eigen::MatrixXd> factorize_dense(const MomentumSystem& sys) {
  const std::size_t a = sys.dom().interior_count();
  if (a > 2048)
    throw TooLargeForDense("dense momentum fallback limited to a <= 2048, got a=" +
                           std::to_string(a));
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a),
                                            static_cast<Eigen::Index>(a));
  for (std::size_t k = 0; k < a; ++k) {
    A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = sys.diag(k);
    for (std::size_t e = 0; e < 6; ++e)
      if (sys.off_index(k, e) >= 0)
        A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(sys.off_index(k, e))) =
            sys.off(k, e);
  }
  return Eigen::PartialPivLU<Eigen::MatrixXd>(A);
}

}  // namespace

MomentumSolve solve(const MomentumSystem& sys, const VectorField& f, const MomentumOptions& opt) {
  require_same_domain(sys.dom(), f.dom(), "momentum solve");
  const std::size_t a = sys.dom().interior_count();

  MomentumSolve out{VectorField(sys.u_n().domain_ptr()), 0, 0, 0, false, false};
  out.max_div_un = max_abs_divergence_interior(sys.u_n());
  out.div_warning = out.max_div_un > opt.div_warn;

  ApplyFn apply = [&sys](const std::vector<double>& x, std::vector<double>& y) {
    sys.apply(x, y);
  };

  std::array<std::vector<double>, 3> y;
  bool need_dense = opt.force_dense;
  if (!need_dense) {
    for (int c = 0; c < 3 && !need_dense; ++c) {
      std::vector<double> b = rhs_component(sys, f, c);
      KrylovResult kr = bicgstab(apply, b, y[static_cast<std::size_t>(c)], opt.tol,
                                 std::max(64, opt.max_iter_factor * static_cast<int>(a)));
      out.iterations = std::max(out.iterations, kr.iterations);
      out.residual = std::max(out.residual, kr.relative_residual);
      if (!kr.converged) need_dense = true;
    }
  }
  if (need_dense) {
    if (a > 2048)
      throw SolverDiverged(
          "momentum: BiCGStab failed (residual " + std::to_string(out.residual) +
          ") and the interior is too large for the dense fallback; the tolerance may be too "
          "tight or u^n is far from discretely divergence free (max |D.u^n| = " +
          std::to_string(out.max_div_un) + ")");
    auto lu = factorize_dense(sys);
    out.residual = 0;
    for (int c = 0; c < 3; ++c) {
      std::vector<double> b = rhs_component(sys, f, c);
      Eigen::Map<const Eigen::VectorXd> bv(b.data(), static_cast<Eigen::Index>(b.size()));
      Eigen::VectorXd x = lu.solve(bv);
      std::vector<double> xs(x.data(), x.data() + x.size());
      std::vector<double> ax(xs.size());
      sys.apply(xs, ax);
      double rn = 0, bn = 0;
      for (std::size_t k = 0; k < xs.size(); ++k) {
        rn += (ax[k] - b[k]) * (ax[k] - b[k]);
        bn += b[k] * b[k];
      }
      double rel = bn == 0 ? 0 : std::sqrt(rn / bn);
      out.residual = std::max(out.residual, rel);
      if (rel > opt.tol)
        throw SolverDiverged("momentum: dense fallback residual " + std::to_string(rel) +
                             " exceeds tol");
      y[static_cast<std::size_t>(c)] = std::move(xs);
    }
    out.used_dense = true;
  }
  out.u_half = to_field(sys, y);
  return out;
}

VectorField solve_dense(const MomentumSystem& sys, const VectorField& f) {
  require_same_domain(sys.dom(), f.dom(), "momentum solve_dense");
  auto lu = factorize_dense(sys);
  std::array<std::vector<double>, 3> y;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> b = rhs_component(sys, f, c);
    Eigen::Map<const Eigen::VectorXd> bv(b.data(), static_cast<Eigen::Index>(b.size()));
    Eigen::VectorXd x = lu.solve(bv);
    y[static_cast<std::size_t>(c)].assign(x.data(), x.data() + x.size());
  }
  return to_field(sys, y);
}

std::pair<double, double> advection_pairing(const VectorField& u_n, const VectorField& y) {
  require_same_domain(u_n.dom(), y.dom(), "advection_pairing");
  const GridDomain& g = u_n.dom();
  const double h = g.h();
  const double h3 = h * h * h;
  double sum = 0, scale = 0;
  for (std::size_t i : g.interior_points()) {
    for (int c = 0; c < 3; ++c) {
      double yi = y.comp(c)[i];
      double term = 0;
      for (int j = 0; j < 3; ++j) {
        double d_back = (y.comp(c)[i] - y.comp(c).nb(i, j, -1)) / h;  // D_j^+ y at x-he^j
        double d_here = (y.comp(c).nb(i, j, +1) - y.comp(c)[i]) / h;  // D_j^+ y at x
        term += u_n.comp(j).nb(i, j, -1) * d_back + u_n.comp(j)[i] * d_here;
      }
      sum += term * yi * h3;
      scale += std::abs(term * yi * h3);
    }
  }
  return {sum, scale};
}

EnergyTerms energy_identity_terms(const VectorField& u_n, const VectorField& u_half) {
  require_same_domain(u_n.dom(), u_half.dom(), "energy_identity_terms");
  if (max_abs_boundary(u_n) != 0.0 || max_abs_boundary(u_half) != 0.0)
    throw BoundaryNotZero("energy_identity_terms: fields must vanish on the boundary");

  const GridDomain& g = u_n.dom();
  const double h = g.h();
  const double h3 = h * h * h;

  // (i) raw double sum vs. the shifted closed form -sum (D.u^n)|u^{n+1/2}|^2 h^3.
  auto [adv_raw, adv_scale] = advection_pairing(u_n, u_half);
  double adv_closed = 0;
  {
    ScalarField div_un = divergence(u_n);
    for (std::size_t i : g.interior_points()) {
      double mag2 = 0;
      for (int c = 0; c < 3; ++c) mag2 += u_half.comp(c)[i] * u_half.comp(c)[i];
      adv_closed -= div_un[i] * mag2 * h3;
    }
  }

  // (ii) raw sum of D_j^2 u . u vs. -sum_j ||D_j^+ u||^2 over the whole grid.
  double dif_raw = 0, dif_scale = 0;
  for (std::size_t i : g.interior_points())
    for (int c = 0; c < 3; ++c)
      for (int j = 0; j < 3; ++j) {
        double lap = (u_half.comp(c).nb(i, j, +1) + u_half.comp(c).nb(i, j, -1) -
                      2.0 * u_half.comp(c)[i]) /
                     (h * h);
        dif_raw += lap * u_half.comp(c)[i] * h3;
        dif_scale += std::abs(lap * u_half.comp(c)[i] * h3);
      }
  double dif_closed = 0;
  for (int j = 0; j < 3; ++j) {
    VectorField dj = dplus(u_half, j);
    dif_closed -= inner(dj, dj);
  }

  double adv_tol = 1e-11 * (adv_scale + std::abs(adv_closed)) + 1e-300;
  double dif_tol = 1e-11 * (dif_scale + std::abs(dif_closed)) + 1e-300;
  if (std::abs(adv_raw - adv_closed) > adv_tol)
    throw InternalCheck("energy identity: advection term disagreement " +
                        std::to_string(std::abs(adv_raw - adv_closed)));
  if (std::abs(dif_raw - dif_closed) > dif_tol)
    throw InternalCheck("energy identity: diffusion term disagreement " +
                        std::to_string(std::abs(dif_raw - dif_closed)));

  return {adv_closed, dif_closed};
}

}  // namespace nsfd
