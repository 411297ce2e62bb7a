#ifndef BOGO_SOLVER_HPP
#define BOGO_SOLVER_HPP

#include <cstdint>
#include <vector>

#include "bogo/gibbs.hpp"

namespace bogo {

struct ContractionReport {
  double alpha = 0;
  double c_beta = 0;
  double rate_bound = 0;  // e^{alpha C(beta)} / alpha
  int iterations = 0;
  double final_delta = 0;
  bool converged = false;
  double observed_ratio_max = 0;  // max step-to-step delta ratio over the run
  double empirical_ratio_max = 0; // certificate only
  bool empirical_ok = true;       // certificate only
  double wall_time_s = 0;
  std::vector<double> deltas;     // per-iteration weighted sup-norm steps
};

// Certified upper bound for ||L||_alpha = sup_theta |L(theta)| e^{-alpha ||theta||}:
//   sum_eta |k(eta)| (e alpha)^{-|eta|},
// from the per-site optimum t e^{-alpha t} <= 1/(e alpha).  Exact for constants.
double ent_norm_upper_bound(const SetFunction& coeffs, double alpha);

// Coefficient table of (JL)(theta) = sum_x sigma_x theta_x int_0^1
// L((1+t theta)(e^{-beta phi(x,.)}-1) + t theta) dt.  Realized exactly by
// evaluating JL at every indicator field 1_xi (Gauss-Legendre in t, exact
// for the polynomial integrand) and Moebius-extracting the coefficients;
// the per-site folds below are an algebraic reorganization of those 2^N
// evaluations, not an approximation.
SetFunction apply_J(const SetFunction& coeffs, const SiteSpace& space, const PairPotential& pot,
                    int jobs = 1);

// Picard iteration L <- 1 + J L in coefficient form, stopping when the
// weighted sup-norm step max_eta |dk(eta)| (e alpha)^{-|eta|} falls to tol.
// Requires a positive off-diagonal potential and rate_bound < 1 (refuses
// otherwise).  alpha = 0 selects the default 1/C(beta).
std::pair<SetFunction, ContractionReport> fixed_point_solve(const SiteSpace& space, const PairPotential& pot,
                                                            double tol, int max_iter,
                                                            const SetFunction* init = nullptr,
                                                            double alpha = 0, int jobs = 1);

// C(beta), the norm bound e^{alpha C}/alpha, and the empirical operator
// ratio ||J(L1-L2)||-bound / ||L1-L2||-bound over random coefficient pairs.
ContractionReport contraction_certificate(const SiteSpace& space, const PairPotential& pot, double alpha,
                                          int n_pairs = 100, std::uint64_t seed = 7, int jobs = 1);

}  // namespace bogo

#endif
