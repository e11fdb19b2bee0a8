#include "nsfd/analysis.hpp"

#include <cmath>

#include "nsfd/errors.hpp"

namespace nsfd {

VectorField qh_apply(const TestFunction& tf, std::shared_ptr<const GridDomain> g) {
  VectorField out(std::move(g));
  const double h = out.dom().h();
  for (std::size_t i = 0; i < out.dom().size(); ++i) {
    Point x = out.dom().position(i);
    for (int j = 0; j < 3; ++j)
      out.comp(j)[i] = tf.value(j, x) + 0.5 * h * tf.d1(j, j, x) +
                       h * h / 12.0 * tf.d2_same(j, j, x);
  }
  return out;
}

DivergenceDefect divergence_defect(const RunResult& run, const ScalarTestFunction& chi, int n,
                                   bool allow_support_violation) {
  if (n < 0 || n >= run.T_tau || !run.complete_states)
    throw MissingSnapshots("divergence_defect: step " + std::to_string(n) + " not available");
  const GridDomain& g = *run.grid;
  if (!support_clear_of_collar(chi.support, g)) {
    if (!allow_support_violation)
      throw SupportTooClose("test function '" + chi.name +
                            "' reaches into the boundary collar at h=" + std::to_string(g.h()));
  }

  const VectorField& u_half = run.u_half[static_cast<std::size_t>(n)];
  const VectorField& u_n = run.u[static_cast<std::size_t>(n)];
  const VectorField& f = run.force[static_cast<std::size_t>(n)];
  const double tau = run.tau;

  ScalarField chi_h = sample_on_grid(chi, run.grid);
  DivergenceDefect out;
  out.lhs = std::abs(inner(divergence(u_half), chi_h));
  out.hodge_slop = std::abs(inner(divergence(u_n), chi_h));

  VectorField dchi = gradient(chi_h);
  double term1 = 0, term3 = 0;
  for (int j = 0; j < 3; ++j) {
    double dju = norm(dplus(u_half, j));
    term1 += norm(u_n.comp(j)) * dju;
    term3 += norm(dplus(dchi, j)) * dju;
  }
  out.rhs = tau * (chi.max_grad() * term1 + norm(dchi) * norm(f) + term3);
  return out;
}

namespace {

// Per-cell integrals of the spatial factor and its first derivatives over
// the shifted cells C_h^+(y); exact for the polynomial dictionary.
struct CellIntegrals {
  // [comp][point]
  std::array<std::vector<double>, 3> phi;
  // [axis][comp][point]
  std::array<std::array<std::vector<double>, 3>, 3> dphi;
};

CellIntegrals cell_integrals(const TestFunction& tf, const GridDomain& g) {
  CellIntegrals ci;
  const std::size_t n = g.size();
  for (int c = 0; c < 3; ++c) {
    ci.phi[static_cast<std::size_t>(c)].assign(n, 0.0);
    for (int a = 0; a < 3; ++a) ci.dphi[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)].assign(n, 0.0);
  }
  std::array<std::array<SepScalar, 3>, 3> dparts;  // [axis][comp]
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c)
      dparts[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] =
          tf.phi[static_cast<std::size_t>(c)].partial(a);
  for (std::size_t i = 0; i < n; ++i) {
    Box cb = cell(g.position(i), g.h(), CellVariant::Shifted);
    for (int c = 0; c < 3; ++c) {
      ci.phi[static_cast<std::size_t>(c)][i] = tf.phi[static_cast<std::size_t>(c)].integrate_box(cb);
      for (int a = 0; a < 3; ++a)
        ci.dphi[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)][i] =
            dparts[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)].integrate_box(cb);
    }
  }
  return ci;
}

}  // namespace

WeakFormResidual weak_form_residual(const RunResult& run, const TestFunction& tf,
                                    bool allow_support_violation) {
  if (!run.complete_states) throw MissingSnapshots("weak_form_residual: incomplete run states");
  const GridDomain& g = *run.grid;
  if (tf.theta.kind() == Envelope::Kind::One)
    throw ConfigError("weak_form_residual needs a temporal cutoff vanishing at T");
  if (tf.theta.value(run.config.T) != 0.0)
    throw ConfigError("temporal cutoff does not vanish at T");
  if (!support_clear_of_collar(tf.support, g) && !allow_support_violation)
    throw SupportTooClose("test function '" + tf.name +
                          "' reaches into the boundary collar at h=" + std::to_string(g.h()));

  const double tau = run.tau;
  const double T = run.config.T;
  const int T_tau = run.T_tau;
  CellIntegrals ci = cell_integrals(tf, g);

  auto dot_cellphi = [&](const VectorField& v) {
    double s = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (int c = 0; c < 3; ++c) s += v.comp(c)[i] * ci.phi[static_cast<std::size_t>(c)][i];
    return s;
  };

  WeakFormResidual out;
  out.r1 = tf.theta.value(0.0) * dot_cellphi(run.u[0]);

  // R2 over every slab, the trailing partial one included (u^{T_tau} exists).
  for (int n = 0; n <= T_tau; ++n) {
    double t0 = tau * n, t1 = std::min(tau * (n + 1), T);
    if (!(t1 > t0) && n < T_tau) continue;
    if (n == T_tau && !(t1 > t0)) break;
    double dtheta = tf.theta.value(t1) - tf.theta.value(t0);
    if (dtheta != 0.0) out.r2 += dtheta * dot_cellphi(run.u[static_cast<std::size_t>(n)]);
  }

  // R3, R4, R5 need u^{n+1/2} and f^{n+1}; the cutoff vanishes long before
  // any trailing partial slab, which carries no half-step snapshot.
  for (int n = 0; n < T_tau; ++n) {
    double t0 = tau * n, t1 = std::min(tau * (n + 1), T);
    double itheta = tf.theta.integral(t0, t1);
    if (itheta == 0.0) continue;
    const VectorField& u_n = run.u[static_cast<std::size_t>(n)];
    const VectorField& uh = run.u_half[static_cast<std::size_t>(n)];
    const VectorField& f = run.force[static_cast<std::size_t>(n)];

    double r3 = 0, r4 = 0, r5 = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (int j = 0; j < 3; ++j) {
        const auto& dphij = ci.dphi[static_cast<std::size_t>(j)];
        double unj = u_n.comp(j)[i];
        if (unj != 0.0) {
          for (int c = 0; c < 3; ++c) {
            double pair = uh.comp(c)[i] + uh.comp(c).nb(i, j, +1);
            r3 += unj * pair * dphij[static_cast<std::size_t>(c)][i];
          }
        }
        const double inv_h = 1.0 / g.h();
        for (int c = 0; c < 3; ++c) {
          double w = (uh.comp(c).nb(i, j, +1) - uh.comp(c)[i]) * inv_h;  // D_j^+ u^{n+1/2}
          r4 += w * dphij[static_cast<std::size_t>(c)][i];
        }
      }
      for (int c = 0; c < 3; ++c) r5 += f.comp(c)[i] * ci.phi[static_cast<std::size_t>(c)][i];
    }
    out.r3 += 0.5 * itheta * r3;
    out.r4 += itheta * r4;
    out.r5 += itheta * r5;
  }
  out.total = out.r1 + out.r2 + out.r3 - out.r4 + out.r5;
  return out;
}

LipschitzInterpolant lipschitz_interpolate(const ScalarField& u) {
  if (max_abs_boundary(u) != 0.0)
    throw BoundaryNotZero("lipschitz_interpolate: u does not vanish on the boundary");
  const GridDomain& g = u.dom();
  const double h = g.h();

  // Trilinear interpolation of the zero-extended lattice function; per cell
  // C_h^+(y) this is exactly the appendix formula in terms of D^+ differences.
  auto corner = [&g, &u](Coord c) { return u.at_coord(c); };
  auto eval = [corner, h](const Point& x) {
    Coord c;
    double f[3];
    for (int i = 0; i < 3; ++i) {
      double s = std::floor(x[i] / h);
      c[i] = static_cast<std::int64_t>(s);
      f[i] = x[i] / h - s;
    }
    double v = 0;
    for (int dz = 0; dz < 2; ++dz)
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          double wgt = (dx ? f[0] : 1 - f[0]) * (dy ? f[1] : 1 - f[1]) * (dz ? f[2] : 1 - f[2]);
          if (wgt != 0.0) v += wgt * corner({c[0] + dx, c[1] + dy, c[2] + dz});
        }
    return v;
  };

  // Exact cell integrals: the integrands are polynomials of degree <= 2 per
  // axis, so two-point Gauss per axis integrates them exactly.
  static const double gp[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
  double err_sq = 0;
  double grad_sq[3] = {0, 0, 0};
  const Coord lo = g.coord_min(), hi = g.coord_max();
  for (std::int64_t z = lo[2] - 1; z <= hi[2]; ++z)
    for (std::int64_t y = lo[1] - 1; y <= hi[1]; ++y)
      for (std::int64_t x = lo[0] - 1; x <= hi[0]; ++x) {
        double cvals[2][2][2];
        bool any = false;
        for (int dz = 0; dz < 2; ++dz)
          for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
              double v = corner({x + dx, y + dy, z + dz});
              cvals[dx][dy][dz] = v;
              if (v != 0) any = true;
            }
        std::int64_t yi = g.find({x, y, z});
        double vstep = yi < 0 ? 0.0 : u[static_cast<std::size_t>(yi)];
        if (!any && vstep == 0.0) continue;

        auto tri = [&](double fx, double fy, double fz) {
          double v = 0;
          for (int dz = 0; dz < 2; ++dz)
            for (int dy = 0; dy < 2; ++dy)
              for (int dx = 0; dx < 2; ++dx)
                v += cvals[dx][dy][dz] * (dx ? fx : 1 - fx) * (dy ? fy : 1 - fy) *
                     (dz ? fz : 1 - fz);
          return v;
        };
        auto tri_dx = [&](double fy, double fz) {
          double v = 0;
          for (int dz = 0; dz < 2; ++dz)
            for (int dy = 0; dy < 2; ++dy)
              v += (cvals[1][dy][dz] - cvals[0][dy][dz]) * (dy ? fy : 1 - fy) * (dz ? fz : 1 - fz);
          return v / h;
        };
        auto tri_dy = [&](double fx, double fz) {
          double v = 0;
          for (int dz = 0; dz < 2; ++dz)
            for (int dx = 0; dx < 2; ++dx)
              v += (cvals[dx][1][dz] - cvals[dx][0][dz]) * (dx ? fx : 1 - fx) * (dz ? fz : 1 - fz);
          return v / h;
        };
        auto tri_dz = [&](double fx, double fy) {
          double v = 0;
          for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx)
              v += (cvals[dx][dy][1] - cvals[dx][dy][0]) * (dx ? fx : 1 - fx) * (dy ? fy : 1 - fy);
          return v / h;
        };

        const double cellvol = h * h * h;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int c2 = 0; c2 < 2; ++c2) {
              double wq = cellvol / 8.0;
              double d = tri(gp[a], gp[b], gp[c2]) - vstep;
              err_sq += wq * d * d;
              double dx = tri_dx(gp[b], gp[c2]);
              double dy = tri_dy(gp[a], gp[c2]);
              double dz = tri_dz(gp[a], gp[b]);
              grad_sq[0] += wq * dx * dx;
              grad_sq[1] += wq * dy * dy;
              grad_sq[2] += wq * dz * dz;
            }
      }

  LipschitzInterpolant out;
  out.eval = eval;
  out.err_l2 = std::sqrt(err_sq);
  for (int i = 0; i < 3; ++i) out.grad_l2[static_cast<std::size_t>(i)] = std::sqrt(grad_sq[i]);
  out.grad_l2_max = std::max({out.grad_l2[0], out.grad_l2[1], out.grad_l2[2]});
  VectorField du = gradient(u);
  out.norm_grad_u = norm(du);
  return out;
}

PoincareCheck poincare_check(const ScalarField& phi) {
  if (max_abs_boundary(phi) != 0.0)
    throw BoundaryNotZero("poincare_check: phi does not vanish on the boundary");
  const GridDomain& g = phi.dom();
  const double a = g.spec().x1_diameter();
  PoincareCheck out;
  for (std::size_t i = 0; i < g.size(); ++i) out.lhs += phi[i] * phi[i];
  const double inv_h = 1.0 / g.h();
  for (std::size_t i : g.interior_points()) {
    double d = (phi.nb(i, 0, +1) - phi[i]) * inv_h;
    out.rhs += d * d;
  }
  out.rhs *= a * a;
  return out;
}

namespace {

std::size_t slab_index(const RunResult& run, double t) {
  if (run.T_tau <= 0) throw MissingSnapshots("run has no steps");
  double q = std::floor(t / run.tau);
  return static_cast<std::size_t>(
      std::min(static_cast<double>(run.T_tau - 1), std::max(0.0, q)));
}

}  // namespace

double triple_norm(const RunResult& run, double t) {
  if (!run.complete_states) throw MissingSnapshots("triple_norm: incomplete run states");
  std::size_t n = slab_index(run, t);
  const VectorField& uh = run.u_half[n];
  double s = inner(uh, uh);
  for (int j = 0; j < 3; ++j) {
    VectorField dj = dplus(uh, j);
    s += inner(dj, dj);
  }
  double nf = norm(run.force[n]);
  s += run.tau * nf * nf;
  return std::sqrt(s);
}

double triple_norm_sq_time_integral(const RunResult& run) {
  double total = 0;
  for (int n = 0; n < run.T_tau; ++n) {
    const VectorField& uh = run.u_half[static_cast<std::size_t>(n)];
    double s = inner(uh, uh);
    for (int j = 0; j < 3; ++j) {
      VectorField dj = dplus(uh, j);
      s += inner(dj, dj);
    }
    double nf = norm(run.force[static_cast<std::size_t>(n)]);
    s += run.tau * nf * nf;
    double t0 = run.tau * n, t1 = std::min(run.tau * (n + 1), run.config.T);
    total += s * std::max(0.0, t1 - t0);
  }
  return total;
}

double op_norm_estimate(const RunResult& run1, const RunResult& run2, double t,
                        const std::vector<TestFunction>& dict) {
  if (dict.empty()) throw EmptyDictionary("op_norm_estimate needs at least one test function");
  std::size_t n1 = slab_index(run1, t), n2 = slab_index(run2, t);
  double best = 0;
  bool any = false;
  for (const TestFunction& tf : dict) {
    if (!support_clear_of_collar(tf.support, *run1.grid) ||
        !support_clear_of_collar(tf.support, *run2.grid))
      throw SupportTooClose("dictionary member '" + tf.name +
                            "' is inadmissible for one of the grids");
    any = true;
    double p1 = inner(run1.u_half[n1], qh_apply(tf, run1.grid));
    double p2 = inner(run2.u_half[n2], qh_apply(tf, run2.grid));
    best = std::max(best, std::abs(p1 - p2));
  }
  if (!any) throw EmptyDictionary("no admissible dictionary member");
  return best;
}

}  // namespace nsfd
