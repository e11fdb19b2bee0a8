#pragma once

#include <functional>
#include <optional>
#include <string>

#include "nsfd/analytic.hpp"
#include "nsfd/field.hpp"
#include "nsfd/hodge.hpp"
#include "nsfd/momentum.hpp"

namespace nsfd {

// Initial-data or force description: a named analytic field, or a file-based
// piecewise-constant donor (a field dump on the same domain at its own mesh
// size, read as a step function over shifted cells).
struct FieldSpec {
  enum class Kind { Zero, Constant, SolenoidalBump, DecayingSwirl, File };
  Kind kind = Kind::Zero;
  std::array<double, 3> value{0, 0, 0};       // constant
  Point center{0.5, 0.5, 0.5};                // bump / swirl
  Point halfwidth{0.22, 0.22, 0.22};
  std::array<double, 3> potential{0, 0, 1};   // bump potential amplitudes
  double amplitude = 1.0;
  double decay = 1.0;                         // swirl e^{-decay t}
  std::string file;

  bool is_file() const { return kind == Kind::File; }
  bool is_zero() const { return kind == Kind::Zero; }
  AnalyticField make_analytic(const DomainSpec& spec) const;
  std::string kind_name() const;
};

struct RunConfig {
  int schema = 1;
  DomainSpec domain;
  double h = 1.0 / 16.0;
  std::optional<double> tau;    // explicit time step ...
  std::optional<double> alpha;  // ... or tau = h^{3-alpha}, alpha in (0,2]
  double T = 0.25;
  FieldSpec initial;
  FieldSpec force;
  HodgeOptions hodge;
  MomentumOptions momentum;
  SumMode sum_mode = SumMode::Sequential;
  std::string out_dir = "out";
  int cadence = 0;  // snapshot every k steps, 0 = none
  bool vtk = false;

  void validate() const;
  double resolved_tau() const;
  // T_tau with T in [tau T_tau, tau T_tau + tau).
  int num_steps() const;
};

struct LedgerRow {
  int n = 0;
  double norm_u = 0;        // ||u^n||
  double norm_u_half = 0;   // ||u^{n+1/2}||
  double norm_u_next = 0;   // ||u^{n+1}||
  double sum_grad_sq = 0;   // sum_j ||D_j^+ u^{n+1/2}||^2
  double norm_f = 0;        // ||f^{n+1}||
  double slack_41 = 0;      // rhs - lhs of (per-step energy bound)
  double slack_42 = 0;      // cumulative linear bound
  double slack_43 = 0;      // cumulative quadratic bound
  double max_div_u_next = 0;
  double hodge_residual = 0;
  int hodge_iterations = 0;
  double momentum_residual = 0;
  int momentum_iterations = 0;
  double max_div_un = 0;
  double wall_ms = 0;  // excluded from determinism comparisons
};

struct RunLedger {
  double h = 0, tau = 0, T = 0;
  int T_tau = 0;
  double norm_u0 = 0;        // ||u^0|| after projection
  double norm_tilde_u0 = 0;  // ||tilde u^0|| before projection
  double norm_v0_l2 = 0;     // ||v^0||_{L^2(Omega)}, exact
  double norm_f_l2l2 = 0;    // ||f||_{L^2([0,T'];L^2)}, T' = tau*T_tau, exact
  std::vector<LedgerRow> rows;
};

struct RunResult {
  RunConfig config;
  std::shared_ptr<const GridDomain> grid;
  double tau = 0;
  int T_tau = 0;
  bool complete_states = true;  // false for restarted runs
  std::vector<VectorField> u;       // u^0 .. u^{T_tau}
  std::vector<VectorField> u_half;  // u^{1/2} .. u^{T_tau-1+1/2}
  std::vector<VectorField> force;   // f^1 .. f^{T_tau}
  RunLedger ledger;
};

// Cumulative context needed to continue a run from a checkpoint with a
// ledger identical to the uninterrupted one.
struct RunStart {
  explicit RunStart(VectorField state, int step = 0) : u(std::move(state)), n(step) {}
  VectorField u;
  int n = 0;
  double norm_u0 = 0;
  double cum_f_tau = 0;     // sum_{m<n} ||f^{m+1}|| tau
  double cum_grad_tau = 0;  // sum_{m<n} (sum_j ||D_j^+ u^{m+1/2}||^2) tau
  double cum_uf_tau = 0;    // sum_{m<n} ||u^m|| ||f^{m+1}|| tau
  double cum_f2_tau2 = 0;   // sum_{m<n} ||f^{m+1}||^2 tau^2
};

// tilde u^0: cell averages of v^0 over centered cells at interior points,
// zero on the boundary; exact (clipped polynomial) integration for analytic
// specs, exact overlap integration for file-based step-function donors.
VectorField cell_average_initial(const FieldSpec& v0, std::shared_ptr<const GridDomain> g);

struct InitialIngest {
  VectorField tilde_u0;
  VectorField u0;
  double hodge_residual = 0;
  int hodge_iterations = 0;
};
InitialIngest ingest_initial(const FieldSpec& v0, std::shared_ptr<const GridDomain> g,
                             const HodgeOptions& opt);

// f^{n+1}: space-time average over [tau n, tau(n+1)] x C_h(x) at every grid
// point (boundary values stored but unused by the momentum equation).
VectorField ingest_force(const FieldSpec& f, int n, std::shared_ptr<const GridDomain> g,
                         double tau);

using ViolationSink = std::function<void(const RunResult&, const std::string& reason)>;

RunResult run(const RunConfig& cfg, const RunStart* start = nullptr,
              const ViolationSink& on_violation = {});

}  // namespace nsfd
