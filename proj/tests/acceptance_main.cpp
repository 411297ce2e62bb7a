// Acceptance suite: runs one numbered criterion (or all of them) and prints
// a pass/fail line per criterion.  Exit code 0 iff everything passed.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "bogo/verify.hpp"

using namespace bogo;

namespace {

struct Criterion {
  int number;
  const char* title;
  std::vector<Assertion> (*run)(const VerifyOptions&);
};

const Criterion kCriteria[] = {
    {1, "exact identity suite (transforms, duality, derivatives)", criterion_exact_identities},
    {2, "GNZ balance for exact Gibbs measures", criterion_gnz},
    {3, "equilibrium functional equation, forms i-iii", criterion_bogoliubov},
    {4, "contraction fixed point and uniqueness", criterion_contraction},
    {5, "grand-canonical Monte Carlo oracles", criterion_gcmc},
    {6, "free dynamics against heat flow", criterion_dynamics_free},
    {7, "interacting desk case: SDE vs hierarchy vs functional law", criterion_dynamics_interacting},
    {8, "generator triangularity and conservation laws", criterion_conservation},
    {9, "seeded reruns are byte-identical", criterion_reproducibility},
};

bool run_criterion(const Criterion& c, const VerifyOptions& opt) {
  std::vector<Assertion> assertions;
  bool threw = false;
  std::string what;
  try {
    assertions = c.run(opt);
  } catch (const std::exception& e) {
    threw = true;
    what = e.what();
  }
  bool ok = !threw;
  for (const Assertion& a : assertions)
    if (!a.pass) ok = false;
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", c.number, c.title);
  if (threw) std::printf("       aborted: %s\n", what.c_str());
  for (const Assertion& a : assertions) {
    if (a.pass) continue;
    std::printf("       failed check %s: value %.6g vs tolerance %.6g %s\n", a.name.c_str(), a.value,
                a.tolerance, a.note.c_str());
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  VerifyOptions opt;
  opt.out_dir = "acceptance_out";
  if (const char* env = std::getenv("BOGO_JOBS")) opt.jobs = std::atoi(env);
  if (opt.jobs < 1) opt.jobs = 1;

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  bool all_ok = true;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.number != only) continue;
    if (!run_criterion(c, opt)) all_ok = false;
  }
  return all_ok ? 0 : 1;
}
