// nsfd command-line front end: grid-info | decompose | step | run | study |
// audit | check. Exit codes: 0 success, 2 config error, 3 solver failure,
// 4 invariant violation. Errors go to stderr as single-line JSON.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "nsfd/analysis.hpp"
#include "nsfd/config.hpp"
#include "nsfd/errors.hpp"
#include "nsfd/harness.hpp"
#include "nsfd/io.hpp"
#include "nsfd/selftest.hpp"

namespace fs = std::filesystem;
using namespace nsfd;

namespace {

int exit_code_for(const Error& e) {
  const std::string& c = e.code();
  if (c == "ConfigError" || c == "EmptyGrid" || c == "IoError" || c == "AlignmentError")
    return 2;
  if (c == "SolverDiverged" || c == "TooLargeForDense" || c == "SingularMatrix") return 3;
  return 4;
}

void emit_error(const Error& e) {
  Json j;
  j["error"] = e.code();
  j["message"] = e.what();
  std::cerr << j.dump() << "\n";
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides) {
  return parse_run_config(read_text_file(path), overrides);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "'");
}

void write_run_outputs(const RunConfig& cfg, const RunResult& res) {
  ensure_dir(cfg.out_dir);
  write_text_file(cfg.out_dir + "/ledger.csv", ledger_csv(res.ledger));
  Json summary = run_summary(res);
  summary["config"] = serialize_run_config(cfg);
  write_text_file(cfg.out_dir + "/summary.json", summary.dump(2) + "\n");
  write_field(cfg.out_dir + "/u_final.field", res.u.back());
  if (cfg.cadence > 0)
    for (int n = 0; n <= res.T_tau; n += cfg.cadence) {
      write_field(cfg.out_dir + "/u_" + std::to_string(n) + ".field",
                  res.u[static_cast<std::size_t>(n)]);
      if (cfg.vtk)
        write_vtk(cfg.out_dir + "/u_" + std::to_string(n) + ".vtk",
                  res.u[static_cast<std::size_t>(n)], "u");
    }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-difference projection solver for the incompressible "
               "Navier-Stokes equations, with convergence diagnostics"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;

  auto add_common = [&](CLI::App* sub, bool config_required = true) {
    auto* opt = sub->add_option("-c,--config", config_path, "configuration file");
    if (config_required) opt->required();
    sub->add_option("-s,--set", overrides, "override: section.key=value")->take_all();
  };

  auto* sc_grid = app.add_subcommand("grid-info", "print the grid summary as JSON");
  add_common(sc_grid);
  std::string grid_dump;
  sc_grid->add_option("--dump-points", grid_dump, "write the binary point list here");

  auto* sc_dec = app.add_subcommand("decompose", "decompose a field dump into (w, phi)");
  add_common(sc_dec);
  std::string dec_in, dec_out = "hodge";
  bool dec_dense = false;
  sc_dec->add_option("-i,--in", dec_in, "input field dump")->required();
  sc_dec->add_option("-o,--out-prefix", dec_out, "output prefix");
  sc_dec->add_flag("--dense", dec_dense, "use the dense oracle backend");

  auto* sc_step = app.add_subcommand("step", "advance one step from a checkpoint");
  add_common(sc_step);
  std::string step_state, step_ledger, step_out = "step";
  int step_n = 0;
  sc_step->add_option("--state", step_state, "state dump of u^n")->required();
  sc_step->add_option("-n", step_n, "step index of the state")->required();
  sc_step->add_option("--ledger", step_ledger, "ledger CSV of the preceding steps");
  sc_step->add_option("-o,--out-prefix", step_out, "output prefix");

  auto* sc_run = app.add_subcommand("run", "execute the full scheme");
  add_common(sc_run);

  auto* sc_study = app.add_subcommand("study", "run a dyadic convergence study");
  add_common(sc_study);

  auto* sc_audit = app.add_subcommand("audit", "re-verify a ledger CSV");
  add_common(sc_audit, false);
  std::string audit_ledger;
  sc_audit->add_option("--ledger", audit_ledger, "ledger CSV path")->required();

  auto* sc_check = app.add_subcommand("check", "run the built-in invariant battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sc_grid->parsed()) {
      RunConfig cfg = load_run_config(config_path, overrides);
      auto g = GridDomain::build(cfg.domain, cfg.h);
      Json j = grid_summary(*g);
      if (!g->interior_connected())
        std::cerr << R"({"warning":"DisconnectedGrid","message":"interior is not edge-connected at this h"})"
                  << "\n";
      std::cout << j.dump(2) << "\n";
      if (!grid_dump.empty()) write_grid_points(grid_dump, *g);
      return 0;
    }

    if (sc_dec->parsed()) {
      RunConfig cfg = load_run_config(config_path, overrides);
      auto g = GridDomain::build(cfg.domain, cfg.h);
      VectorField u = dump_to_vector_field(read_field(dec_in), g);
      HodgeResult r = dec_dense ? decompose_dense(u) : decompose(u, cfg.hodge);
      write_field(dec_out + "_w.field", r.w);
      write_field(dec_out + "_phi.field", r.phi);
      Json j;
      j["max_div"] = r.residuals.max_div;
      j["max_recon"] = r.residuals.max_recon;
      j["max_bnd_w"] = r.residuals.max_bnd_w;
      j["max_bnd_phi"] = r.residuals.max_bnd_phi;
      j["iterations"] = r.iterations;
      j["solver_residual"] = r.solver_residual;
      write_text_file(dec_out + "_residuals.json", j.dump(2) + "\n");
      std::cout << j.dump() << "\n";
      return 0;
    }

    if (sc_step->parsed()) {
      RunConfig cfg = load_run_config(config_path, overrides);
      auto g = GridDomain::build(cfg.domain, cfg.h);
      RunStart start(dump_to_vector_field(read_field(step_state), g), step_n);
      if (!step_ledger.empty()) {
        RunLedger prior = parse_ledger_csv(read_text_file(step_ledger));
        start.norm_u0 = prior.norm_u0;
        for (const LedgerRow& r : prior.rows) {
          if (r.n >= step_n) break;
          start.cum_f_tau += r.norm_f * prior.tau;
          start.cum_grad_tau += r.sum_grad_sq * prior.tau;
          start.cum_uf_tau += r.norm_u * r.norm_f * prior.tau;
          start.cum_f2_tau2 += r.norm_f * r.norm_f * prior.tau * prior.tau;
        }
      } else {
        start.norm_u0 = norm(start.u);
      }
      RunConfig one = cfg;
      one.tau = cfg.resolved_tau();
      one.alpha.reset();
      one.T = std::min(cfg.T, one.resolved_tau() * (step_n + 1));
      RunResult res = run(one, &start);
      write_field(step_out + "_u_half.field", res.u_half.back());
      write_field(step_out + "_u_next.field", res.u.back());
      write_text_file(step_out + "_row.csv", ledger_csv(res.ledger));
      std::cout << run_summary(res).dump() << "\n";
      return 0;
    }

    if (sc_run->parsed()) {
      RunConfig cfg = load_run_config(config_path, overrides);
      ViolationSink sink = [&cfg](const RunResult& partial, const std::string& reason) {
        ensure_dir(cfg.out_dir);
        write_text_file(cfg.out_dir + "/ledger_violation.csv", ledger_csv(partial.ledger));
        Json j;
        j["reason"] = reason;
        write_text_file(cfg.out_dir + "/violation.json", j.dump(2) + "\n");
      };
      RunResult res = run(cfg, nullptr, sink);
      write_run_outputs(cfg, res);
      AuditReport audit = ledger_audit(res.ledger);
      Json j = run_summary(res);
      j["audit_ok"] = audit.ok;
      j["audit_max_violation"] = audit.max_violation;
      std::cout << j.dump(2) << "\n";
      if (!audit.ok) throw LedgerViolation("post-run audit failed");
      return 0;
    }

    if (sc_study->parsed()) {
      StudyPlan plan = parse_study_config(read_text_file(config_path), overrides);
      StudyReport rep = run_study(plan);
      ensure_dir(plan.base.out_dir);
      write_text_file(plan.base.out_dir + "/study.json", rep.to_json().dump(2) + "\n");
      write_text_file(plan.base.out_dir + "/distances.csv", rep.distances_csv());
      std::cout << rep.to_json().dump(2) << "\n";
      return 0;
    }

    if (sc_audit->parsed()) {
      RunLedger ledger = parse_ledger_csv(read_text_file(audit_ledger));
      AuditReport rep = ledger_audit(ledger);
      Json j;
      j["rows"] = rep.rows;
      j["max_violation"] = rep.max_violation;
      j["recompute_mismatches"] = rep.recompute_mismatches;
      j["chain_breaks"] = rep.chain_breaks;
      j["ok"] = rep.ok;
      std::cout << j.dump(2) << "\n";
      return rep.ok ? 0 : 4;
    }

    if (sc_check->parsed()) {
      SelfTestReport rep = selftest();
      for (const std::string& line : rep.lines) std::cout << line << "\n";
      std::cout << rep.passed << " passed, " << rep.failed << " failed\n";
      return rep.ok() ? 0 : 4;
    }
  } catch (const Error& e) {
    emit_error(e);
    return exit_code_for(e);
  } catch (const std::exception& e) {
    Json j;
    j["error"] = "Unexpected";
    j["message"] = e.what();
    std::cerr << j.dump() << "\n";
    return 4;
  }
  return 0;
}
