// bogo command-line tool.  All functionality comes through the C API of the
// shared library; this file only parses flags and shapes config JSON.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bogo/bogo_c.h"
#include "json.hpp"

namespace {

int map_status_to_exit(bogo_status st) {
  switch (st) {
    case BOGO_OK: return 0;
    case BOGO_EPARSE:
    case BOGO_EINVAL: return 2;
    case BOGO_EREGIME:
    case BOGO_EASSERT:
    case BOGO_ENOCONV: return 1;
    default: return 3;
  }
}

struct CommonFlags {
  std::string config;
  std::string out;
  std::int64_t seed = -1;
  int jobs = 0;
  double tol_scale = 1.0;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required) {
  auto* c = cmd->add_option("--config", f.config, "experiment config JSON path");
  if (config_required) c->required();
  cmd->add_option("--seed", f.seed, "seed override (64-bit)");
  cmd->add_option("--jobs", f.jobs, "worker pool size (fallback: BOGO_JOBS env)");
  cmd->add_option("--out", f.out, "output directory override");
  cmd->add_option("--tolerance-scale", f.tol_scale, "scales in-config assertion tolerances");
}

int run_from_file(const CommonFlags& f, const char* expect_block) {
  if (expect_block != nullptr) {
    std::ifstream in(f.config);
    if (!in) {
      std::cerr << "error: cannot read config " << f.config << "\n";
      return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      auto j = nlohmann::json::parse(ss.str());
      if (!j.contains(expect_block)) {
        std::cerr << "error: config " << f.config << " has no '" << expect_block << "' block\n";
        return 2;
      }
    } catch (const std::exception& e) {
      std::cerr << "error: config: " << e.what() << "\n";
      return 2;
    }
  }
  int exit_code = 3;
  bogo_status st = bogo_run_config_file(f.config.c_str(), f.out.empty() ? nullptr : f.out.c_str(), f.seed,
                                        f.jobs, f.tol_scale, &exit_code);
  if (st != BOGO_OK) {
    std::cerr << "error: " << bogo_last_error() << "\n";
    return map_status_to_exit(st);
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harmonic analysis on configuration spaces: exact identities, "
               "Gibbs equilibrium, contraction solver, GCMC and diffusion hierarchy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bogo_version()));

  CommonFlags run_f, exact_f, fixed_f, gcmc_f, sde_f, hier_f, verify_f;
  std::string verify_suite = "exact";
  std::string plot_kind, plot_run;

  CLI::App* cmd_run = app.add_subcommand("run", "run the subcommand named by the config block");
  add_common(cmd_run, run_f, true);
  CLI::App* cmd_exact = app.add_subcommand("exact", "exact finite-space identity battery");
  add_common(cmd_exact, exact_f, false);
  CLI::App* cmd_fixed = app.add_subcommand("fixedpoint", "contraction fixed-point solver");
  add_common(cmd_fixed, fixed_f, true);
  CLI::App* cmd_gcmc = app.add_subcommand("gcmc", "grand-canonical Monte Carlo");
  add_common(cmd_gcmc, gcmc_f, true);
  CLI::App* cmd_sde = app.add_subcommand("sde", "interacting Brownian particle ensemble");
  add_common(cmd_sde, sde_f, true);
  CLI::App* cmd_hier = app.add_subcommand("hierarchy", "correlation diffusion hierarchy");
  add_common(cmd_hier, hier_f, true);
  CLI::App* cmd_verify = app.add_subcommand("verify", "verification suites");
  add_common(cmd_verify, verify_f, false);
  cmd_verify->add_option("--suite", verify_suite, "exact | solver | gcmc | dynamics | repro | all");
  CLI::App* cmd_plot = app.add_subcommand("plot", "emit plot-ready CSV from a completed run");
  cmd_plot->add_option("--kind", plot_kind, "plot kind")->required();
  cmd_plot->add_option("--run", plot_run, "run directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (cmd_run->parsed()) return run_from_file(run_f, nullptr);
  if (cmd_exact->parsed()) {
    if (!exact_f.config.empty()) return run_from_file(exact_f, "exact");
    int exit_code = 3;
    bogo_status st = bogo_run_config("{\"exact\": {}}", exact_f.out.empty() ? nullptr : exact_f.out.c_str(),
                                     exact_f.seed, exact_f.jobs, exact_f.tol_scale, &exit_code);
    if (st != BOGO_OK) {
      std::cerr << "error: " << bogo_last_error() << "\n";
      return map_status_to_exit(st);
    }
    return exit_code;
  }
  if (cmd_fixed->parsed()) return run_from_file(fixed_f, "fixedpoint");
  if (cmd_gcmc->parsed()) return run_from_file(gcmc_f, "gcmc");
  if (cmd_sde->parsed()) return run_from_file(sde_f, "sde");
  if (cmd_hier->parsed()) return run_from_file(hier_f, "hierarchy");
  if (cmd_verify->parsed()) {
    if (!verify_f.config.empty()) return run_from_file(verify_f, "verify");
    nlohmann::json cfg = {{"verify", {{"suite", verify_suite}}}};
    int exit_code = 3;
    bogo_status st =
        bogo_run_config(cfg.dump().c_str(), verify_f.out.empty() ? nullptr : verify_f.out.c_str(),
                        verify_f.seed, verify_f.jobs, verify_f.tol_scale, &exit_code);
    if (st != BOGO_OK) {
      std::cerr << "error: " << bogo_last_error() << "\n";
      return map_status_to_exit(st);
    }
    return exit_code;
  }
  if (cmd_plot->parsed()) {
    bogo_status st = bogo_emit_plotdata(plot_run.c_str(), plot_kind.c_str());
    if (st != BOGO_OK) {
      std::cerr << "error: " << bogo_last_error() << "\n";
      return map_status_to_exit(st);
    }
    return 0;
  }
  return 2;
}
