#ifndef BOGO_SDE_HPP
#define BOGO_SDE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "bogo/box.hpp"
#include "bogo/gcmc.hpp"

namespace bogo {

// Interacting Brownian particles in a periodic box, Euler-Maruyama:
//   x += -(beta/2) sum_{j != i} grad V(x_i - x_j) dt + sqrt(dt) xi,
// with standard normal xi per coordinate and per-pair gradients clipped at
// force_cap.
struct SdeConfig {
  Box box;
  enum class Start { poisson, fixed, cosine } start = Start::poisson;
  double z = 1;                    // Poisson / cosine mean intensity
  double cosine_amp = 0.5;         // relative amplitude for the cosine profile
  std::vector<Point> fixed_start;  // for Start::fixed
  double beta = 1;
  RadialPotential pot = RadialPotential::gauss(0, 1, 1);
  double dt = 1e-3;
  double t_end = 1;
  int n_replicas = 100;
  double force_cap = 100;
  std::uint64_t seed = 1;
  double noise_scale = 1.0;  // 0 turns the dynamics into a gradient flow
  std::vector<double> record_times;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ParticleState> states;

  const ParticleState& at_time(double t) const;
};

// Simulates n_replicas independent copies; replica r draws from the Philox
// stream (seed, r), so the ensemble is reproducible and order-independent.
std::vector<Trajectory> simulate_sde(const SdeConfig& cfg, int jobs = 1);

// Cross-replica density and two-point estimates at a fixed time.  Needs at
// least 100 replicas.  r_max <= side/2.
CorrelationEstimate empirical_correlations(const std::vector<Trajectory>& trajs, const Box& box, double t,
                                           double r_max, int n_bins);

// Binned one-point density profile along the first coordinate.
struct ProfileEstimate {
  std::vector<double> bin_lo, bin_hi;
  std::vector<double> k1, k1_se;
};
ProfileEstimate density_profile(const std::vector<Trajectory>& trajs, const Box& box, double t, int n_bins);

}  // namespace bogo

#endif
