#include "nsfd/stepper.hpp"

#include <chrono>
#include <cmath>

#include "nsfd/errors.hpp"
#include "nsfd/io.hpp"

namespace nsfd {

AnalyticField FieldSpec::make_analytic(const DomainSpec& spec) const {
  switch (kind) {
    case Kind::Zero:
      return make_zero_field();
    case Kind::Constant:
      return make_constant_field(value, spec.bounding_box());
    case Kind::SolenoidalBump:
      return make_solenoidal_bump(center, halfwidth, potential, amplitude);
    case Kind::DecayingSwirl:
      return make_decaying_swirl(center, halfwidth, amplitude, decay);
    case Kind::File:
      throw ConfigError("file-based field has no analytic form");
  }
  throw ConfigError("unknown field kind");
}

std::string FieldSpec::kind_name() const {
  switch (kind) {
    case Kind::Zero: return "zero";
    case Kind::Constant: return "constant";
    case Kind::SolenoidalBump: return "solenoidal-bump";
    case Kind::DecayingSwirl: return "decaying-swirl";
    case Kind::File: return "file";
  }
  return "?";
}

void RunConfig::validate() const {
  if (schema != 1) throw ConfigError("unsupported schema version " + std::to_string(schema));
  if (!(h > 0)) throw ConfigError("[grid].h must be positive");
  if (!(T > 0)) throw ConfigError("[time].T must be positive");
  if (tau && alpha) throw ConfigError("[time]: give either tau or alpha, not both");
  if (!tau && !alpha) throw ConfigError("[time]: one of tau or alpha is required");
  if (alpha && !(*alpha > 0 && *alpha <= 2))
    throw ConfigError("[time].alpha = " + std::to_string(*alpha) +
                      " outside the admissible range (0, 2]");
  if (tau && !(*tau > 0)) throw ConfigError("[time].tau must be positive");
  if (initial.kind == FieldSpec::Kind::DecayingSwirl)
    throw ConfigError("[initial]: time-dependent field not admissible as initial data");
}

double RunConfig::resolved_tau() const {
  if (tau) return *tau;
  return std::pow(h, 3.0 - *alpha);
}

int RunConfig::num_steps() const {
  const double t = resolved_tau();
  double q = T / t;
  int k = static_cast<int>(std::floor(q + 1e-9));
  while (t * k > T * (1 + 1e-12)) --k;
  return std::max(k, 0);
}

namespace {

// Exact average of a piecewise-constant donor field over an axis-aligned box.
double step_function_box_average(const GridDomain& donor, const ScalarField& vals,
                                 const Box& cell) {
  const double hd = donor.h();
  double total = 0;
  Coord lo, hi;
  for (int i = 0; i < 3; ++i) {
    lo[i] = static_cast<std::int64_t>(std::floor(cell.lo[i] / hd));
    hi[i] = static_cast<std::int64_t>(std::floor(cell.hi[i] / hd));
  }
  for (std::int64_t cz = lo[2]; cz <= hi[2]; ++cz)
    for (std::int64_t cy = lo[1]; cy <= hi[1]; ++cy)
      for (std::int64_t cx = lo[0]; cx <= hi[0]; ++cx) {
        std::int64_t idx = donor.find({cx, cy, cz});
        if (idx < 0) continue;
        double v = vals[static_cast<std::size_t>(idx)];
        if (v == 0) continue;
        double overlap = 1;
        Point y{hd * static_cast<double>(cx), hd * static_cast<double>(cy),
                hd * static_cast<double>(cz)};
        for (int i = 0; i < 3; ++i)
          overlap *= std::max(0.0, std::min(cell.hi[i], y[i] + hd) - std::max(cell.lo[i], y[i]));
        total += v * overlap;
      }
  double vol = 1;
  for (int i = 0; i < 3; ++i) vol *= cell.hi[i] - cell.lo[i];
  return total / vol;
}

struct FileDonor {
  std::shared_ptr<const GridDomain> grid;
  VectorField field;
  FileDonor(const DomainSpec& spec, const std::string& path)
      : grid(nullptr), field(load(spec, path, grid)) {}

 private:
  static VectorField load(const DomainSpec& spec, const std::string& path,
                          std::shared_ptr<const GridDomain>& grid_out) {
    FieldDump dump = read_field(path);
    grid_out = GridDomain::build(spec, dump.h);
    return dump_to_vector_field(dump, grid_out);
  }
};

}  // namespace

VectorField cell_average_initial(const FieldSpec& v0, std::shared_ptr<const GridDomain> g) {
  VectorField u(g);
  const GridDomain& grid = *g;
  const double h = grid.h();
  const double inv_h3 = 1.0 / (h * h * h);

  if (v0.is_zero()) return u;

  if (v0.is_file()) {
    FileDonor donor(grid.spec(), v0.file);
    for (std::size_t i : grid.interior_points()) {
      Box c = cell(grid.position(i), h, CellVariant::Centered);
      for (int comp = 0; comp < 3; ++comp)
        u.comp(comp)[i] = step_function_box_average(*donor.grid, donor.field.comp(comp), c);
    }
    return u;
  }

  AnalyticField f = v0.make_analytic(grid.spec());
  if (f.time.kind() != Envelope::Kind::One)
    throw ConfigError("initial data must be time independent");
  for (std::size_t i : grid.interior_points()) {
    Box c = cell(grid.position(i), h, CellVariant::Centered);
    for (int comp = 0; comp < 3; ++comp)
      u.comp(comp)[i] = inv_h3 * f.spatial[static_cast<std::size_t>(comp)].integrate_box(c);
  }
  return u;
}

InitialIngest ingest_initial(const FieldSpec& v0, std::shared_ptr<const GridDomain> g,
                             const HodgeOptions& opt) {
  InitialIngest out{cell_average_initial(v0, g), VectorField(g), 0, 0};
  HodgeResult hr = decompose(out.tilde_u0, opt);
  out.u0 = std::move(hr.w);
  out.hodge_residual = hr.solver_residual;
  out.hodge_iterations = hr.iterations;
  return out;
}

VectorField ingest_force(const FieldSpec& fspec, int n, std::shared_ptr<const GridDomain> g,
                         double tau) {
  VectorField f(g);
  if (fspec.is_zero()) return f;
  const GridDomain& grid = *g;
  const double h = grid.h();
  const double inv = 1.0 / (tau * h * h * h);

  if (fspec.is_file()) {
    // Steady donor: the time average is the spatial average.
    FileDonor donor(grid.spec(), fspec.file);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      Box c = cell(grid.position(i), h, CellVariant::Centered);
      for (int comp = 0; comp < 3; ++comp)
        f.comp(comp)[i] = step_function_box_average(*donor.grid, donor.field.comp(comp), c);
    }
    return f;
  }

  AnalyticField af = fspec.make_analytic(grid.spec());
  const double tfac = af.time.integral(tau * n, tau * (n + 1));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Box c = cell(grid.position(i), h, CellVariant::Centered);
    for (int comp = 0; comp < 3; ++comp)
      f.comp(comp)[i] = inv * tfac * af.spatial[static_cast<std::size_t>(comp)].integrate_box(c);
  }
  return f;
}

namespace {

double l2l2_force_norm(const FieldSpec& fspec, const DomainSpec& dom, double t_end) {
  if (fspec.is_zero()) return 0;
  if (fspec.is_file()) {
    FileDonor donor(dom, fspec.file);
    double s = 0;
    const double h3 = std::pow(donor.grid->h(), 3);
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < donor.grid->size(); ++i)
        s += donor.field.comp(c)[i] * donor.field.comp(c)[i] * h3;
    return std::sqrt(t_end * s);
  }
  AnalyticField af = fspec.make_analytic(dom);
  return std::sqrt(af.time.square_integral(0, t_end) * af.spatial_l2_sq(dom));
}

}  // namespace

RunResult run(const RunConfig& cfg, const RunStart* start, const ViolationSink& on_violation) {
  cfg.validate();
  auto grid = GridDomain::build(cfg.domain, cfg.h);
  const double tau = cfg.resolved_tau();
  const int T_tau = cfg.num_steps();

  RunResult res;
  res.config = cfg;
  res.grid = grid;
  res.tau = tau;
  res.T_tau = T_tau;
  res.ledger.h = cfg.h;
  res.ledger.tau = tau;
  res.ledger.T = cfg.T;
  res.ledger.T_tau = T_tau;
  res.u.assign(static_cast<std::size_t>(T_tau) + 1, VectorField(grid));
  res.u_half.assign(static_cast<std::size_t>(T_tau), VectorField(grid));
  res.force.assign(static_cast<std::size_t>(T_tau), VectorField(grid));

  int n0 = 0;
  double cum_f_tau = 0, cum_grad_tau = 0, cum_uf_tau = 0, cum_f2_tau2 = 0;
  if (start == nullptr) {
    InitialIngest init = ingest_initial(cfg.initial, grid, cfg.hodge);
    res.ledger.norm_tilde_u0 = norm(init.tilde_u0, cfg.sum_mode);
    res.ledger.norm_u0 = norm(init.u0, cfg.sum_mode);
    res.u[0] = std::move(init.u0);
  } else {
    if (start->n < 0 || start->n > T_tau) throw ConfigError("restart index out of range");
    require_same_domain(start->u.dom(), *grid, "restart state");
    n0 = start->n;
    res.complete_states = false;
    res.u[static_cast<std::size_t>(n0)] = start->u;
    res.ledger.norm_u0 = start->norm_u0;
    cum_f_tau = start->cum_f_tau;
    cum_grad_tau = start->cum_grad_tau;
    cum_uf_tau = start->cum_uf_tau;
    cum_f2_tau2 = start->cum_f2_tau2;
  }
  res.ledger.norm_v0_l2 = [&] {
    if (cfg.initial.is_zero()) return 0.0;
    if (cfg.initial.is_file()) return l2l2_force_norm(cfg.initial, cfg.domain, 1.0);
    AnalyticField af = cfg.initial.make_analytic(cfg.domain);
    return std::sqrt(af.spatial_l2_sq(cfg.domain));
  }();
  res.ledger.norm_f_l2l2 = l2l2_force_norm(cfg.force, cfg.domain, tau * T_tau);

  const double slack_tol = 1e-10;
  for (int n = n0; n < T_tau; ++n) {
    auto t0 = std::chrono::steady_clock::now();
    LedgerRow row;
    row.n = n;

    VectorField f = ingest_force(cfg.force, n, grid, tau);
    const VectorField& u_n = res.u[static_cast<std::size_t>(n)];
    row.norm_u = norm(u_n, cfg.sum_mode);
    row.norm_f = norm(f, cfg.sum_mode);

    MomentumSystem sys = assemble(u_n, tau);
    MomentumSolve ms = solve(sys, f, cfg.momentum);
    row.momentum_residual = ms.residual;
    row.momentum_iterations = ms.iterations;
    row.max_div_un = ms.max_div_un;
    row.norm_u_half = norm(ms.u_half, cfg.sum_mode);
    double grad_sq = 0;
    for (int j = 0; j < 3; ++j) {
      VectorField dj = dplus(ms.u_half, j);
      grad_sq += inner(dj, dj, cfg.sum_mode);
    }
    row.sum_grad_sq = grad_sq;

    HodgeResult hr = decompose(ms.u_half, cfg.hodge);
    row.hodge_residual = hr.solver_residual;
    row.hodge_iterations = hr.iterations;
    row.max_div_u_next = hr.residuals.max_div;
    row.norm_u_next = norm(hr.w, cfg.sum_mode);

    cum_f_tau += row.norm_f * tau;
    cum_grad_tau += grad_sq * tau;
    cum_uf_tau += row.norm_u * row.norm_f * tau;
    cum_f2_tau2 += row.norm_f * row.norm_f * tau * tau;

    row.slack_41 = row.norm_u + tau * row.norm_f - row.norm_u_half;
    row.slack_42 = res.ledger.norm_u0 + cum_f_tau - row.norm_u_next;
    const double rhs_43 = res.ledger.norm_u0 * res.ledger.norm_u0 - cum_grad_tau +
                          2.0 * cum_uf_tau + cum_f2_tau2;
    row.slack_43 = rhs_43 - row.norm_u_next * row.norm_u_next;

    const double scale_41 = row.norm_u + tau * row.norm_f + row.norm_u_half;
    const double scale_42 = res.ledger.norm_u0 + cum_f_tau + row.norm_u_next;
    const double scale_43 = res.ledger.norm_u0 * res.ledger.norm_u0 + cum_grad_tau +
                            2.0 * cum_uf_tau + cum_f2_tau2 +
                            row.norm_u_next * row.norm_u_next;

    res.u_half[static_cast<std::size_t>(n)] = std::move(ms.u_half);
    res.force[static_cast<std::size_t>(n)] = std::move(f);
    res.u[static_cast<std::size_t>(n) + 1] = std::move(hr.w);

    auto t1 = std::chrono::steady_clock::now();
    row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    res.ledger.rows.push_back(row);

    auto breach = [&](double slack, double scale, const char* which) {
      if (slack < -slack_tol * scale) {
        std::string reason = std::string("energy inequality ") + which + " violated at step " +
                             std::to_string(n) + " (slack " + std::to_string(slack) + ")";
        if (on_violation) on_violation(res, reason);
        throw LedgerViolation(reason);
      }
    };
    breach(row.slack_41, scale_41, "(per-step)");
    breach(row.slack_42, scale_42, "(cumulative linear)");
    breach(row.slack_43, scale_43, "(cumulative quadratic)");
  }
  return res;
}

}  // namespace nsfd
