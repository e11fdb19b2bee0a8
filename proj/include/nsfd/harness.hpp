#pragma once

#include <map>
#include <string>
#include <vector>

#include "nsfd/analysis.hpp"
#include "nsfd/io.hpp"
#include "nsfd/stepper.hpp"

namespace nsfd {

// Convergence-study plan over a dyadic family of mesh sizes under the
// scaling condition h^{3-alpha} <= tau.
struct StudyPlan {
  RunConfig base;                // h / tau / alpha overridden per level
  std::vector<double> levels_h;  // coarse to fine
  double alpha = 2.0;
  std::vector<std::string> dictionary_names;  // empty = whole dictionary
  bool weak_form = true;
  bool div_bound = true;
  void validate() const;
};

// Largest tau = T/2^m with tau >= h^{3-alpha}: keeps both the scaling
// condition and exact slab alignment across levels. Throws AlignmentError
// when even tau = T violates the condition.
double dyadic_tau(double T, double h, double alpha);

struct LevelReport {
  double h = 0, tau = 0;
  int T_tau = 0;
  std::size_t grid_points = 0, grid_interior = 0;
  double final_norm = 0;
  double min_slack_41 = 0, min_slack_42 = 0, min_slack_43 = 0;
  double triple_integral = 0;  // int_0^T |||v|||^2 dt
  double triple_bound = 0;     // level-independent bound derived from the a priori estimates
  bool triple_ok = false;
  double divkey_max_lhs = 0;      // max over steps and scalar components
  double divkey_max_excess = 0;   // max of lhs - (rhs + slop), negative when compliant
  bool divkey_margin_ok = false;  // dictionary admissible at this h
  bool divkey_ok = false;
  double audit_max_violation = 0;
  std::map<std::string, double> weak_totals;  // |R1+R2+R3-R4+R5| per member
  double wall_ms = 0;
};

struct StudyReport {
  std::vector<LevelReport> levels;
  std::vector<double> pairwise_distances;  // ||v_{d_k} - v_{d_{k+1}}||_{L2L2}
  bool distances_strictly_decreasing = false;
  std::map<std::string, bool> weak_monotone;
  double distance_rate = 0;  // least-squares slope of log dist vs log h
  std::map<std::string, double> weak_rate;
  Json to_json() const;      // timings under a separate "timings" key
  std::string distances_csv() const;
};

StudyReport run_study(const StudyPlan& plan);

struct AuditReport {
  int rows = 0;
  // worst relative violation of the re-derived inequalities (0 when clean)
  double max_violation = 0;
  // stored slack columns that disagree with the re-computation
  int recompute_mismatches = 0;
  // norm_u chain breaks between consecutive rows
  int chain_breaks = 0;
  bool ok = false;
};

// Re-verifies every per-step and cumulative inequality from the raw ledger
// norm columns, trusting nothing that was stored as a slack.
AuditReport ledger_audit(const RunLedger& ledger);

}  // namespace nsfd
