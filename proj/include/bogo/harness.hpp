#ifndef BOGO_HARNESS_HPP
#define BOGO_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "bogo/common.hpp"

namespace bogo {

// CLI-facing orchestration: config ingestion, subcommand dispatch, output
// persistence, manifest writing, plot-data emission.

struct RunOptions {
  std::string out_dir;  // overrides the config's output_dir when non-empty
  std::optional<std::uint64_t> seed;
  int jobs = 0;  // 0 picks default_jobs()
  double tolerance_scale = 1.0;
};

// Executes the single subcommand block of the config.  Returns the process
// exit code: 0 all assertions pass, 1 assertion failure or outside-regime
// refusal, 2 config parse/validation error, 3 runtime abort.  A manifest is
// written whenever the run gets past parsing.
int run_config_json(const std::string& config_text, const RunOptions& opt);
int run_config_file(const std::string& config_path, const RunOptions& opt);

// Derives plot-ready CSV series from a completed run directory.
void emit_plotdata(const std::string& run_dir, const std::string& kind);
std::vector<std::string> plot_kinds();

}  // namespace bogo

#endif
