#include "nsfd/harness.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "nsfd/errors.hpp"

namespace nsfd {

void StudyPlan::validate() const {
  if (levels_h.size() < 2) throw ConfigError("[study].levels needs at least two mesh sizes");
  if (!(alpha > 0 && alpha <= 2))
    throw ConfigError("[study].alpha = " + std::to_string(alpha) +
                      " outside the admissible range (0, 2]");
  for (std::size_t k = 0; k + 1 < levels_h.size(); ++k)
    if (!(levels_h[k] > levels_h[k + 1]))
      throw ConfigError("[study].levels must be strictly decreasing mesh sizes");
  for (double h : levels_h) (void)dyadic_tau(base.T, h, alpha);
}

double dyadic_tau(double T, double h, double alpha) {
  const double floor_tau = std::pow(h, 3.0 - alpha);
  if (floor_tau > T * (1 + 1e-12))
    throw AlignmentError("scaling condition h^{3-alpha} <= tau unsatisfiable: h^{3-alpha} = " +
                         std::to_string(floor_tau) + " exceeds T = " + std::to_string(T));
  int m = 0;
  while (T / std::ldexp(1.0, m + 1) >= floor_tau * (1 - 1e-12)) ++m;
  return T / std::ldexp(1.0, m);
}

namespace {

std::string run_key(const RunConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << cfg.domain.kind_name() << '|' << cfg.h << '|' << cfg.resolved_tau() << '|' << cfg.T << '|'
     << cfg.initial.kind_name() << '|' << cfg.force.kind_name() << '|' << cfg.hodge.tol << '|'
     << cfg.momentum.tol;
  return os.str();
}

double lsq_slope(const std::vector<double>& logx, const std::vector<double>& logy) {
  const std::size_t n = logx.size();
  if (n < 2) return 0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += logx[i];
    my += logy[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (logx[i] - mx) * (logy[i] - my);
    den += (logx[i] - mx) * (logx[i] - mx);
  }
  return den == 0 ? 0 : num / den;
}

}  // namespace

StudyReport run_study(const StudyPlan& plan) {
  plan.validate();
  const auto& dict = dictionary();
  std::vector<const TestFunction*> members;
  if (plan.dictionary_names.empty()) {
    for (const TestFunction& tf : dict) members.push_back(&tf);
  } else {
    for (const std::string& name : plan.dictionary_names)
      members.push_back(&dictionary_member(name));
  }

  std::unordered_map<std::string, RunResult> cache;
  StudyReport report;
  std::vector<RunResult*> runs;

  for (double h : plan.levels_h) {
    RunConfig cfg = plan.base;
    cfg.h = h;
    cfg.alpha.reset();
    cfg.tau = dyadic_tau(plan.base.T, h, plan.alpha);
    cfg.validate();

    auto t0 = std::chrono::steady_clock::now();
    std::string key = run_key(cfg);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, run(cfg)).first;
    RunResult& rr = it->second;
    runs.push_back(&rr);

    LevelReport lv;
    lv.h = h;
    lv.tau = rr.tau;
    lv.T_tau = rr.T_tau;
    lv.grid_points = rr.grid->size();
    lv.grid_interior = rr.grid->interior_count();
    lv.final_norm = rr.ledger.rows.empty() ? rr.ledger.norm_u0
                                           : rr.ledger.rows.back().norm_u_next;
    bool first = true;
    for (const LedgerRow& row : rr.ledger.rows) {
      if (first) {
        lv.min_slack_41 = row.slack_41;
        lv.min_slack_42 = row.slack_42;
        lv.min_slack_43 = row.slack_43;
        first = false;
      } else {
        lv.min_slack_41 = std::min(lv.min_slack_41, row.slack_41);
        lv.min_slack_42 = std::min(lv.min_slack_42, row.slack_42);
        lv.min_slack_43 = std::min(lv.min_slack_43, row.slack_43);
      }
    }

    // (*)-term: time integral of the squared triple norm, bounded by the
    // a priori estimates alone:
    //   M  = V + sqrt(T') F   bounds every ||u^n||,
    //   M2 = M + sqrt(tau) F  bounds every ||u^{n+1/2}||,
    //   sum tau sum_j ||D_j^+ u^{n+1/2}||^2 <= V^2 + 2 M sqrt(T') F + tau F^2.
    lv.triple_integral = triple_norm_sq_time_integral(rr);
    {
      const double V = rr.ledger.norm_v0_l2;
      const double F = rr.ledger.norm_f_l2l2;
      const double Tp = rr.tau * rr.T_tau;
      const double M = V + std::sqrt(Tp) * F;
      const double M2 = M + std::sqrt(rr.tau) * F;
      lv.triple_bound = Tp * M2 * M2 + V * V + 2.0 * M * std::sqrt(Tp) * F +
                        2.0 * rr.tau * F * F;
      lv.triple_ok = lv.triple_integral <= lv.triple_bound * (1 + 1e-12);
    }

    if (plan.div_bound) {
      lv.divkey_margin_ok = true;
      for (const TestFunction* tf : members)
        if (!support_clear_of_collar(tf->support, *rr.grid)) lv.divkey_margin_ok = false;
      lv.divkey_ok = true;
      lv.divkey_max_excess = -std::numeric_limits<double>::infinity();
      for (const TestFunction* tf : members)
        for (const ScalarTestFunction& chi : scalar_components(*tf))
          for (int n = 0; n < rr.T_tau; ++n) {
            DivergenceDefect d = divergence_defect(rr, chi, n, true);
            lv.divkey_max_lhs = std::max(lv.divkey_max_lhs, d.lhs);
            double budget = d.rhs + d.hodge_slop + 1e-12 * (d.lhs + d.rhs + 1.0);
            lv.divkey_max_excess = std::max(lv.divkey_max_excess, d.lhs - budget);
            if (lv.divkey_margin_ok && d.lhs > budget) lv.divkey_ok = false;
          }
      if (!lv.divkey_margin_ok) lv.divkey_ok = false;
    }

    if (plan.weak_form) {
      for (const TestFunction* tf : members) {
        TestFunction timed = with_time_cutoff(*tf, plan.base.T);
        WeakFormResidual w = weak_form_residual(rr, timed, true);
        lv.weak_totals[tf->name] = std::abs(w.total);
      }
    }

    lv.audit_max_violation = ledger_audit(rr.ledger).max_violation;
    auto t1 = std::chrono::steady_clock::now();
    lv.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    report.levels.push_back(std::move(lv));
  }

  // Cauchy surrogate: consecutive distances of the intermediate-velocity
  // embeddings, strictly decreasing along the family.
  for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
    EmbeddedField a = EmbeddedField::build(*runs[k], EmbedKind::V);
    EmbeddedField b = EmbeddedField::build(*runs[k + 1], EmbedKind::V);
    report.pairwise_distances.push_back(l2_distance(a, b));
  }
  report.distances_strictly_decreasing = true;
  for (std::size_t k = 0; k + 1 < report.pairwise_distances.size(); ++k)
    if (!(report.pairwise_distances[k + 1] < report.pairwise_distances[k]))
      report.distances_strictly_decreasing = false;

  {
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < report.pairwise_distances.size(); ++k) {
      if (report.pairwise_distances[k] <= 0) continue;
      lx.push_back(std::log(plan.levels_h[k]));
      ly.push_back(std::log(report.pairwise_distances[k]));
    }
    report.distance_rate = lsq_slope(lx, ly);
  }

  if (plan.weak_form) {
    for (const TestFunction* tf : members) {
      bool monotone = true;
      std::vector<double> lx, ly;
      for (std::size_t k = 0; k < report.levels.size(); ++k) {
        double v = report.levels[k].weak_totals.at(tf->name);
        if (k > 0 && !(v < report.levels[k - 1].weak_totals.at(tf->name))) monotone = false;
        if (v > 0) {
          lx.push_back(std::log(plan.levels_h[k]));
          ly.push_back(std::log(v));
        }
      }
      report.weak_monotone[tf->name] = monotone;
      report.weak_rate[tf->name] = lsq_slope(lx, ly);
    }
  }
  return report;
}

Json StudyReport::to_json() const {
  Json j;
  j["levels"] = Json::array();
  double wall = 0;
  for (const LevelReport& lv : levels) {
    Json l;
    l["h"] = lv.h;
    l["tau"] = lv.tau;
    l["T_tau"] = lv.T_tau;
    l["grid_points"] = lv.grid_points;
    l["grid_interior"] = lv.grid_interior;
    l["final_norm"] = lv.final_norm;
    l["min_slack_41"] = lv.min_slack_41;
    l["min_slack_42"] = lv.min_slack_42;
    l["min_slack_43"] = lv.min_slack_43;
    l["triple_integral"] = lv.triple_integral;
    l["triple_bound"] = lv.triple_bound;
    l["triple_ok"] = lv.triple_ok;
    l["divkey_max_lhs"] = lv.divkey_max_lhs;
    l["divkey_max_excess"] = lv.divkey_max_excess;
    l["divkey_margin_ok"] = lv.divkey_margin_ok;
    l["divkey_ok"] = lv.divkey_ok;
    l["audit_max_violation"] = lv.audit_max_violation;
    l["weak_totals"] = lv.weak_totals;
    j["levels"].push_back(std::move(l));
    wall += lv.wall_ms;
  }
  j["pairwise_distances"] = pairwise_distances;
  j["distances_strictly_decreasing"] = distances_strictly_decreasing;
  j["distance_rate"] = distance_rate;
  j["weak_monotone"] = weak_monotone;
  j["weak_rate"] = weak_rate;
  j["timings"] = Json{{"total_wall_ms", wall}};
  return j;
}

std::string StudyReport::distances_csv() const {
  std::ostringstream os;
  os << "pair,h_coarse,distance\n";
  os.precision(17);
  for (std::size_t k = 0; k < pairwise_distances.size(); ++k)
    os << k << ',' << levels[k].h << ',' << pairwise_distances[k] << "\n";
  return os.str();
}

AuditReport ledger_audit(const RunLedger& ledger) {
  AuditReport rep;
  rep.rows = static_cast<int>(ledger.rows.size());
  const double tau = ledger.tau;
  double cum_f_tau = 0, cum_grad_tau = 0, cum_uf_tau = 0, cum_f2_tau2 = 0;
  double prev_next = ledger.norm_u0;
  auto violation = [&](double slack, double scale) {
    double v = scale > 0 ? std::max(0.0, -slack) / scale : std::max(0.0, -slack);
    rep.max_violation = std::max(rep.max_violation, v);
  };
  auto mismatch = [&](double stored, double recomputed, double scale) {
    if (std::abs(stored - recomputed) > 1e-12 * (scale + 1.0)) ++rep.recompute_mismatches;
  };
  for (const LedgerRow& r : ledger.rows) {
    if (r.norm_u != prev_next) ++rep.chain_breaks;
    prev_next = r.norm_u_next;

    cum_f_tau += r.norm_f * tau;
    cum_grad_tau += r.sum_grad_sq * tau;
    cum_uf_tau += r.norm_u * r.norm_f * tau;
    cum_f2_tau2 += r.norm_f * r.norm_f * tau * tau;

    double s41 = r.norm_u + tau * r.norm_f - r.norm_u_half;
    double sc41 = r.norm_u + tau * r.norm_f + r.norm_u_half;
    double s42 = ledger.norm_u0 + cum_f_tau - r.norm_u_next;
    double sc42 = ledger.norm_u0 + cum_f_tau + r.norm_u_next;
    double rhs43 = ledger.norm_u0 * ledger.norm_u0 - cum_grad_tau + 2.0 * cum_uf_tau +
                   cum_f2_tau2;
    double s43 = rhs43 - r.norm_u_next * r.norm_u_next;
    double sc43 = ledger.norm_u0 * ledger.norm_u0 + cum_grad_tau + 2.0 * cum_uf_tau +
                  cum_f2_tau2 + r.norm_u_next * r.norm_u_next;

    violation(s41, sc41);
    violation(s42, sc42);
    violation(s43, sc43);
    // projection contraction ||u^{n+1}|| <= ||u^{n+1/2}||
    violation(r.norm_u_half - r.norm_u_next, r.norm_u_half + r.norm_u_next);

    mismatch(r.slack_41, s41, sc41);
    mismatch(r.slack_42, s42, sc42);
    mismatch(r.slack_43, s43, sc43);
  }
  rep.ok = rep.max_violation <= 1e-10 && rep.recompute_mismatches == 0 && rep.chain_breaks == 0;
  return rep;
}

}  // namespace nsfd
