#ifndef BOGO_VERIFY_HPP
#define BOGO_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bogo/manifest.hpp"

namespace bogo {

// Verification suites.  Each criterion function runs a fixed battery of
// checks with pinned tolerances and returns one assertion per check.  The
// CLI `verify` subcommand and the acceptance test binary both drive these.
struct VerifyOptions {
  std::uint64_t seed = 12345;
  int jobs = 1;
  double tol_scale = 1.0;     // scales tolerances; keep 1 for acceptance
  std::string out_dir;        // when set, criteria persist their data here
};

std::vector<Assertion> criterion_exact_identities(const VerifyOptions& opt);   // 1
std::vector<Assertion> criterion_gnz(const VerifyOptions& opt);                // 2
std::vector<Assertion> criterion_bogoliubov(const VerifyOptions& opt);         // 3
std::vector<Assertion> criterion_contraction(const VerifyOptions& opt);        // 4
std::vector<Assertion> criterion_gcmc(const VerifyOptions& opt);               // 5
std::vector<Assertion> criterion_dynamics_free(const VerifyOptions& opt);      // 6
std::vector<Assertion> criterion_dynamics_interacting(const VerifyOptions& opt);  // 7
std::vector<Assertion> criterion_conservation(const VerifyOptions& opt);       // 8
std::vector<Assertion> criterion_reproducibility(const VerifyOptions& opt);    // 9

// Named suites: exact {1,2,3}, solver {4}, gcmc {5}, dynamics {6,7,8},
// repro {9}, all.
std::vector<std::string> suite_names();
std::vector<Assertion> run_suite(const std::string& name, const VerifyOptions& opt);

}  // namespace bogo

#endif
