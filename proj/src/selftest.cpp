#include "nsfd/selftest.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "nsfd/analysis.hpp"
#include "nsfd/errors.hpp"
#include "nsfd/hodge.hpp"
#include "nsfd/momentum.hpp"
#include "nsfd/stepper.hpp"
#include "nsfd/testfunction.hpp"

namespace nsfd {

ScalarField random_scalar(std::shared_ptr<const GridDomain> g, std::uint64_t seed,
                          bool zero_boundary) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ScalarField f(std::move(g));
  for (std::size_t i = 0; i < f.size(); ++i) {
    double v = dist(rng);
    f[i] = (zero_boundary && f.dom().is_boundary(i)) ? 0.0 : v;
  }
  return f;
}

VectorField random_vector(std::shared_ptr<const GridDomain> g, std::uint64_t seed,
                          bool zero_boundary) {
  VectorField f(g);
  for (int c = 0; c < 3; ++c)
    f.comp(c) = random_scalar(g, seed + static_cast<std::uint64_t>(c) * 7919u, zero_boundary);
  return f;
}

VectorField random_discrete_solenoidal(std::shared_ptr<const GridDomain> g, std::uint64_t seed) {
  VectorField psi = random_vector(g, seed, true);
  // zero out the first interior layer so the curl vanishes on the boundary
  for (std::size_t i = 0; i < g->size(); ++i) {
    if (g->is_boundary(i)) continue;
    bool near = false;
    for (int axis = 0; axis < 3 && !near; ++axis)
      for (int dir : {-1, +1}) {
        std::int64_t j = g->neighbor(i, axis, dir);
        if (j < 0 || g->is_boundary(static_cast<std::size_t>(j))) {
          near = true;
          break;
        }
      }
    if (near)
      for (int c = 0; c < 3; ++c) psi.comp(c)[i] = 0.0;
  }
  VectorField u(g);
  u.comp(0) = dplus(psi.comp(2), 1);
  u.comp(1) = dplus(psi.comp(0), 2);
  u.comp(2) = dplus(psi.comp(1), 0);
  ScalarField a = dplus(psi.comp(1), 2), b = dplus(psi.comp(2), 0), c = dplus(psi.comp(0), 1);
  for (std::size_t i = 0; i < g->size(); ++i) {
    u.comp(0)[i] -= a[i];
    u.comp(1)[i] -= b[i];
    u.comp(2)[i] -= c[i];
  }
  return u;
}

std::shared_ptr<const GridDomain> unit_box_grid(int interior_per_axis) {
  return unit_box_grid_h(1.0 / (interior_per_axis + 5));
}

std::shared_ptr<const GridDomain> unit_box_grid_h(double h) {
  DomainSpec spec;
  spec.kind = ShapeKind::Box;
  spec.box = {{0, 0, 0}, {1, 1, 1}};
  return GridDomain::build(spec, h);
}

std::shared_ptr<const GridDomain> ball_grid(double radius, double h) {
  DomainSpec spec;
  spec.kind = ShapeKind::Ball;
  spec.ball_center = {0, 0, 0};
  spec.ball_radius = radius;
  return GridDomain::build(spec, h);
}

std::shared_ptr<const GridDomain> lshape_grid(double h) {
  DomainSpec spec;
  spec.kind = ShapeKind::LShape;
  spec.box = {{0, 0, 0}, {1.6, 0.8, 0.8}};
  spec.box2 = {{0, 0, 0}, {0.8, 1.6, 0.8}};
  return GridDomain::build(spec, h);
}

namespace {

struct Battery {
  SelfTestReport rep;
  void check(bool ok, const std::string& name, const std::string& detail = "") {
    if (ok) {
      ++rep.passed;
      rep.lines.push_back("ok   " + name);
    } else {
      ++rep.failed;
      rep.lines.push_back("FAIL " + name + (detail.empty() ? "" : ": " + detail));
    }
  }
};

// Brute-force admission oracle: rescan the lattice bounding box.
bool grid_matches_bruteforce(const GridDomain& g) {
  const DomainSpec& spec = g.spec();
  const double h = g.h();
  Box bb = spec.bounding_box();
  std::size_t count = 0;
  for (std::int64_t z = static_cast<std::int64_t>(std::floor(bb.lo[2] / h)) - 2;
       z <= static_cast<std::int64_t>(std::ceil(bb.hi[2] / h)) + 2; ++z)
    for (std::int64_t y = static_cast<std::int64_t>(std::floor(bb.lo[1] / h)) - 2;
         y <= static_cast<std::int64_t>(std::ceil(bb.hi[1] / h)) + 2; ++y)
      for (std::int64_t x = static_cast<std::int64_t>(std::floor(bb.lo[0] / h)) - 2;
           x <= static_cast<std::int64_t>(std::ceil(bb.hi[0] / h)) + 2; ++x) {
        Point p{h * static_cast<double>(x), h * static_cast<double>(y),
                h * static_cast<double>(z)};
        bool admit = spec.contains(p) && spec.contains_closed_cube(p, 2.0 * h);
        std::int64_t idx = g.find({x, y, z});
        if (admit != (idx >= 0)) return false;
        if (idx >= 0) ++count;
      }
  if (count != g.size()) return false;
  // boundary classification by direct neighbor scan
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool bnd = false;
    for (int axis = 0; axis < 3; ++axis)
      for (int dir : {-1, +1}) {
        Coord c = g.coord(i);
        c[axis] += dir;
        if (g.find(c) < 0) bnd = true;
      }
    if (bnd != g.is_boundary(i)) return false;
  }
  return true;
}

bool refinement_covers(const DomainSpec& spec, double h) {
  auto coarse = GridDomain::build(spec, h);
  auto fine = GridDomain::build(spec, h / 2);
  for (std::size_t i = 0; i < coarse->size(); ++i) {
    Coord c = coarse->coord(i);
    for (int dz = 0; dz < 2; ++dz)
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx)
          if (fine->find({2 * c[0] + dx, 2 * c[1] + dy, 2 * c[2] + dz}) < 0) return false;
  }
  return true;
}

}  // namespace

SelfTestReport selftest() {
  Battery b;
  auto box = unit_box_grid(3);     // h = 1/8? no: interior 3^3, h = 1/8 ... 1/(3+5)
  auto ball = ball_grid(1.0, 0.1);
  auto lsh = lshape_grid(0.1);
  std::vector<std::shared_ptr<const GridDomain>> shapes{box, ball, lsh};

  // grid admission, boundary classification, refinement covering
  for (const auto& g : shapes)
    b.check(grid_matches_bruteforce(*g),
            "grid admission/boundary oracle (" + g->spec().kind_name() + ")");
  {
    DomainSpec spec;
    spec.kind = ShapeKind::Box;
    spec.box = {{0, 0, 0}, {1, 1, 1}};
    b.check(refinement_covers(spec, 1.0 / 8), "grid refinement covering (box, h=1/8)");
    b.check(refinement_covers(spec, 1.0 / 16), "grid refinement covering (box, h=1/16)");
    DomainSpec bs;
    bs.kind = ShapeKind::Ball;
    bs.ball_center = {0, 0, 0};
    bs.ball_radius = 1.0;
    b.check(refinement_covers(bs, 1.0 / 8), "grid refinement covering (ball, h=1/8)");
    b.check(refinement_covers(bs, 1.0 / 16), "grid refinement covering (ball, h=1/16)");
  }

  // difference calculus: D^-(D^+ f) = D^2 f pointwise
  {
    bool ok = true;
    ScalarField f = random_scalar(box, 11, false);
    for (int axis = 0; axis < 3 && ok; ++axis) {
      ScalarField lhs = dminus(dplus(f, axis), axis);
      ScalarField rhs = d2(f, axis);
      for (std::size_t i = 0; i < f.size(); ++i)
        if (std::abs(lhs[i] - rhs[i]) > 1e-12 * (std::abs(rhs[i]) + 1)) ok = false;
    }
    b.check(ok, "difference identity D^- D^+ = D^2");
  }

  // summation by parts across shapes
  {
    bool ok = true;
    double worst = 0;
    for (const auto& g : shapes)
      for (std::uint64_t s = 0; s < 30; ++s) {
        VectorField w = random_vector(g, 100 + s, true);
        ScalarField phi = random_scalar(g, 200 + s, true);
        double defect = std::abs(sbp_defect(w, phi));
        double scale = norm(w) * norm(gradient(phi)) + 1e-300;
        worst = std::max(worst, defect / scale);
        if (defect > 1e-12 * scale) ok = false;
      }
    std::ostringstream d;
    d << "worst relative defect " << worst;
    b.check(ok, "summation by parts (30 trials x 3 shapes)", d.str());
  }

  // shifted adjointness of D^+
  {
    bool ok = true;
    for (const auto& g : shapes) {
      VectorField u = random_vector(g, 300, false);
      ScalarField phi = random_scalar(g, 301, true);
      const double h3 = std::pow(g->h(), 3);
      for (int i = 0; i < 3 && ok; ++i)
        for (int j = 0; j < 3 && ok; ++j) {
          ScalarField dU = dplus(u.comp(j), i);
          double lhs = 0, rhs = 0, scale = 0;
          for (std::size_t p = 0; p < g->size(); ++p) {
            lhs += dU[p] * phi[p] * h3;
            Coord c = g->coord(p);
            c[i] -= 1;
            double dphi_shift = (phi[p] - phi.at_coord(c)) / g->h();
            rhs -= u.comp(j)[p] * dphi_shift * h3;
            scale += std::abs(dU[p] * phi[p]) * h3;
          }
          if (std::abs(lhs - rhs) > 1e-12 * (scale + 1e-300)) ok = false;
        }
    }
    b.check(ok, "shifted adjointness of D^+");
  }

  // discrete Poincare inequality
  {
    bool ok = true;
    for (const auto& g : {box, ball})
      for (std::uint64_t s = 0; s < 50 && ok; ++s) {
        ScalarField phi = random_scalar(g, 400 + s, true);
        PoincareCheck pc = poincare_check(phi);
        if (pc.lhs > pc.rhs * (1 + 1e-12)) ok = false;
      }
    b.check(ok, "discrete Poincare inequality (50 trials x 2 shapes)");
  }

  // Hodge: backend agreement, Pythagoras, idempotence, contraction, the
  // projection-error bound for boundary-vanishing fields
  {
    HodgeOptions tight;
    tight.tol = 1e-13;
    bool agree = true, pyth = true, idem = true, contract = true, errb = true;
    for (const auto& g : {box, ball}) {
      const double A = std::pow(g->spec().x1_diameter(), 2);
      for (std::uint64_t s = 0; s < 10; ++s) {
        VectorField u = random_vector(g, 500 + s, false);
        HodgeResult it = decompose(u, tight);
        HodgeResult dn = decompose_dense(u);
        double dmax = 0;
        for (int c = 0; c < 3; ++c)
          for (std::size_t p = 0; p < g->size(); ++p)
            dmax = std::max(dmax, std::abs(it.w.comp(c)[p] - dn.w.comp(c)[p]));
        for (std::size_t p = 0; p < g->size(); ++p)
          dmax = std::max(dmax, std::abs(it.phi[p] - dn.phi[p]));
        if (dmax > 1e-10) agree = false;

        double u2 = 0, w2 = 0, g2 = 0;
        VectorField dphi = gradient(it.phi);
        for (std::size_t p : g->interior_points())
          for (int c = 0; c < 3; ++c) {
            u2 += u.comp(c)[p] * u.comp(c)[p];
            w2 += it.w.comp(c)[p] * it.w.comp(c)[p];
            g2 += dphi.comp(c)[p] * dphi.comp(c)[p];
          }
        if (std::abs(u2 - w2 - g2) > 1e-10 * u2) pyth = false;
        if (norm(it.w) > std::sqrt(u2 * std::pow(g->h(), 3)) * (1 + 1e-10)) contract = false;

        VectorField w2f = project(it.w, tight);
        double dd = 0, wn = norm(it.w) + 1e-300;
        for (int c = 0; c < 3; ++c)
          for (std::size_t p = 0; p < g->size(); ++p)
            dd += std::pow(w2f.comp(c)[p] - it.w.comp(c)[p], 2);
        if (std::sqrt(dd * std::pow(g->h(), 3)) / wn > 2 * tight.tol * 100) idem = false;

        VectorField ub = random_vector(g, 600 + s, true);
        HodgeResult hb = decompose(ub, tight);
        double lhs = 0;
        for (std::size_t p : g->interior_points())
          for (int c = 0; c < 3; ++c) lhs += std::pow(ub.comp(c)[p] - hb.w.comp(c)[p], 2);
        ScalarField du = divergence(ub);
        double rhs = 0;
        for (std::size_t p : g->interior_points()) rhs += du[p] * du[p];
        if (lhs > A * rhs * (1 + 1e-10) + 1e-12) errb = false;
      }
    }
    b.check(agree, "hodge backend agreement <= 1e-10");
    b.check(pyth, "hodge Pythagoras identity");
    b.check(idem, "hodge projection idempotence");
    b.check(contract, "hodge projection contraction");
    b.check(errb, "hodge projection error bound (boundary-vanishing fields)");
  }

  // momentum: stencil consistency, dense agreement, advection annihilation,
  // solvability across a wide tau range
  {
    auto g = unit_box_grid(4);
    VectorField un = random_discrete_solenoidal(g, 700);
    bool stencil_ok = true, dense_ok = true, annihilate = true, solvable = true;

    MomentumSystem sys = assemble(un, 10.0 * g->h());
    const auto& interior = g->interior_points();
    VectorField y = random_vector(g, 701, true);
    // matrix-free oracle: evaluate the scheme's stencil directly
    {
      std::vector<double> yi(interior.size()), out(interior.size());
      for (std::size_t k = 0; k < interior.size(); ++k) yi[k] = y.comp(0)[interior[k]];
      sys.apply(yi, out);
      const double h = g->h(), tau = sys.tau();
      for (std::size_t k = 0; k < interior.size(); ++k) {
        std::size_t p = interior[k];
        double adv = 0, lap = 0;
        for (int j = 0; j < 3; ++j) {
          double dback = (y.comp(0)[p] - y.comp(0).nb(p, j, -1)) / h;
          double dhere = (y.comp(0).nb(p, j, +1) - y.comp(0)[p]) / h;
          adv += 0.5 * (un.comp(j).nb(p, j, -1) * dback + un.comp(j)[p] * dhere);
          lap += (y.comp(0).nb(p, j, +1) + y.comp(0).nb(p, j, -1) - 2 * y.comp(0)[p]) / (h * h);
        }
        double expect = y.comp(0)[p] + tau * (adv - lap);
        if (std::abs(out[k] - expect) > 1e-13 * (std::abs(expect) + 1)) stencil_ok = false;
      }
    }

    VectorField f = random_vector(g, 702, false);
    MomentumOptions mo;
    mo.tol = 1e-11;
    MomentumSolve it = solve(sys, f, mo);
    VectorField dn = solve_dense(sys, f);
    double dmax = 0;
    for (int c = 0; c < 3; ++c)
      for (std::size_t p = 0; p < g->size(); ++p)
        dmax = std::max(dmax, std::abs(it.u_half.comp(c)[p] - dn.comp(c)[p]));
    if (dmax > 1e-9) dense_ok = false;

    auto [pairing, scale] = advection_pairing(un, y);
    if (std::abs(pairing) > 1e-12 * (scale + 1e-300)) annihilate = false;

    for (double tau : {std::pow(g->h(), 3), g->h() * g->h(), g->h(), 10 * g->h(), 100 * g->h()}) {
      MomentumSolve ms = solve(assemble(un, tau), f, mo);
      if (ms.residual > 1e-8) solvable = false;
    }

    b.check(stencil_ok, "momentum assembled operator matches stencil");
    b.check(dense_ok, "momentum iterative matches dense <= 1e-9");
    b.check(annihilate, "advection bilinear form annihilation");
    b.check(solvable, "momentum solvable for tau in {h^3..100h}");
  }

  // energy identity terms: the op itself cross-checks raw vs closed forms
  {
    auto g = unit_box_grid(4);
    bool ok = true;
    try {
      VectorField un = random_discrete_solenoidal(g, 800);
      VectorField uh = random_vector(g, 801, true);
      EnergyTerms et = energy_identity_terms(un, uh);
      auto [pairing, scale] = advection_pairing(un, uh);
      (void)pairing;
      if (std::abs(et.advection) > 1e-12 * (scale + 1e-300)) ok = false;
      if (!(et.diffusion <= 0)) ok = false;
      VectorField zero(g);
      EnergyTerms z = energy_identity_terms(un, zero);
      if (z.advection != 0 || z.diffusion != 0) ok = false;
    } catch (const Error&) {
      ok = false;
    }
    b.check(ok, "energy identity terms (raw vs closed form, signs)");
  }

  // appendix interpolation: corner exactness and frozen-constant bounds
  {
    auto g = unit_box_grid(3);
    bool corners = true, bounds = true;
    for (std::uint64_t s = 0; s < 30; ++s) {
      ScalarField u = random_scalar(g, 900 + s, true);
      LipschitzInterpolant li = lipschitz_interpolate(u);
      for (std::size_t p = 0; p < g->size(); ++p) {
        double v = li.eval(g->position(p));
        if (std::abs(v - u[p]) > 1e-12 * (std::abs(u[p]) + 1)) corners = false;
      }
      if (li.err_l2 > kInterpErrFactor * g->h() * li.norm_grad_u * (1 + 1e-12)) bounds = false;
      if (li.grad_l2_max > kInterpGradFactor * li.norm_grad_u * (1 + 1e-12)) bounds = false;
    }
    b.check(corners, "trilinear interpolant matches lattice values");
    b.check(bounds, "interpolation bounds with frozen constants (30 trials)");
  }

  // dictionary sanity: analytic divergence free, unit normalization, and the
  // corrected-sampling divergence order
  {
    bool divfree = true;
    std::mt19937_64 rng(1000);
    std::uniform_real_distribution<double> dist(0.3, 0.7);
    for (const TestFunction& tf : dictionary()) {
      for (int k = 0; k < 20; ++k) {
        Point x{dist(rng), dist(rng), dist(rng)};
        double div = tf.d1(0, 0, x) + tf.d1(1, 1, x) + tf.d1(2, 2, x);
        if (std::abs(div) > 1e-12) divfree = false;
      }
    }
    b.check(divfree, "dictionary members analytically divergence free");

    auto g1 = unit_box_grid_h(1.0 / 16);
    auto g2 = unit_box_grid_h(1.0 / 32);
    bool order = true;
    const TestFunction& tf = dictionary()[0];
    double m1 = max_abs_divergence_interior(qh_apply(tf, g1));
    double m2 = max_abs_divergence_interior(qh_apply(tf, g2));
    double ratio = m1 / m2;
    if (!(ratio > 6 && ratio < 10)) order = false;
    b.check(order, "Q_h corrected sampling: divergence decays at third order",
            "ratio " + std::to_string(ratio));
  }

  // zero data stays zero through the full scheme
  {
    RunConfig cfg;
    cfg.domain.kind = ShapeKind::Box;
    cfg.domain.box = {{0, 0, 0}, {1, 1, 1}};
    cfg.h = 1.0 / 10;
    cfg.tau = 0.05;
    cfg.T = 0.2;
    RunResult rr = run(cfg);
    bool ok = true;
    for (const VectorField& u : rr.u)
      if (max_abs(u) != 0) ok = false;
    b.check(ok, "zero data yields the zero trajectory");
  }

  return b.rep;
}

}  // namespace nsfd
