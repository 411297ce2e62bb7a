#ifndef BOGO_GCMC_HPP
#define BOGO_GCMC_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bogo/box.hpp"
#include "bogo/rng.hpp"

namespace bogo {

// Grand-canonical birth/death chain in a periodic box.  One sweep performs
// max(1, round(z * volume)) attempted moves.
struct ChainConfig {
  Box box;
  double z = 1;     // activity
  double beta = 1;  // inverse temperature
  RadialPotential pot = RadialPotential::gauss(0, 1, 1);
  long n_sweeps = 1000;
  long burn_in = 100;
  long thinning = 1;  // keep every thinning-th post-burn-in sweep
  std::uint64_t seed = 1;

  void validate() const;
};

// One birth-or-death attempt.  Birth at a uniform point is accepted with
// min(1, z V / (n+1) e^{-beta W}); death of a uniform particle with
// min(1, n / (z V) e^{+beta W}).  Detailed balance holds for the
// grand-canonical weights z^{|gamma|} e^{-beta E(gamma)}.
void gcmc_step(ParticleState& state, const ChainConfig& cfg, Philox& rng);

// Runs the chain and returns the thinned post-burn-in snapshots.
std::vector<ParticleState> run_gcmc(const ChainConfig& cfg, std::uint64_t stream = 0);

struct CorrelationEstimate {
  double k1 = 0;     // density estimate
  double k1_se = 0;  // batch-means standard error
  std::vector<double> bin_lo, bin_hi;
  std::vector<double> g, g_se;    // pair correlation normalized by k1^2
  std::vector<double> k2, k2_se;  // raw two-point density per bin
  long n_samples = 0;
};

// Density and binned pair-correlation estimates with batch-means errors
// (20 batches).  Needs at least 30 samples.
CorrelationEstimate estimate_correlations(const std::vector<ParticleState>& samples, const Box& box,
                                          double r_max, int n_bins);

// H(x, gamma) = h(x) * psi(gamma) test function for the statistical GNZ test.
struct GnzTestFunction {
  std::string name;
  std::function<double(const Point&)> h;          // bounded, supported in the box
  std::function<double(const ParticleState&)> psi;
  double support_lo = 0, support_hi = 0;          // h support per coordinate (cube)
};

struct GnzFunctionResult {
  std::string name;
  double lhs = 0, rhs = 0, diff_se = 0, standardized = 0;
  bool degenerate = false;  // flagged, not failed
  bool pass = false;
};

struct GnzTestReport {
  std::vector<GnzFunctionResult> results;
  double pass_fraction = 0;
  bool pass = false;  // >= 95% of non-degenerate functions within 3 SE
};

// Estimates both sides of the GNZ balance for each test function: the sum
// over particles against the insertion-averaged right-hand side (quadrature
// over a grid of insertion points), with paired batch-means errors.
GnzTestReport gnz_statistical_test(const std::vector<ParticleState>& samples, const ChainConfig& cfg,
                                   const std::vector<GnzTestFunction>& family, int n_quad = 96);

// The 20-function default family: indicator and smooth-bump h paired with
// constant, count and exponential-count psi.
std::vector<GnzTestFunction> default_gnz_family(const Box& box, double r_max);

}  // namespace bogo

#endif
