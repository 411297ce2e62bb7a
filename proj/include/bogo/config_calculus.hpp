#ifndef BOGO_CONFIG_CALCULUS_HPP
#define BOGO_CONFIG_CALCULUS_HPP

#include <functional>

#include "bogo/set_function.hpp"

namespace bogo {

// Exact combinatorial calculus on a finite site space: the additive
// transform K and its Moebius inverse, Lebesgue-Poisson sums, correlation
// tables, generating functionals and their variational derivatives.  All
// sums are finite and every identity below holds to rounding.

// (KG)(gamma) = sum_{eta subset gamma} G(eta); gamma is window-local.
cplx k_transform(const SetFunction& G, Mask gamma_local);
// Dense KG over the whole window (fast zeta transform).
SetFunction k_transform_table(const SetFunction& G);
// G(eta) = sum_{xi subset eta} (-1)^{|eta\xi|} F(xi); exact inverse of the above.
SetFunction k_inverse(const SetFunction& F);

// prod_{x in eta} f(x); empty product is 1.  eta indexes the full space.
cplx coherent_state(const Field& f, Mask eta);

// sum_{eta subset window_local} G(eta) prod_{x in eta} sigma_x.
// The 1/n! of the continuum n-point weights cancels against the n! orderings
// of an n-point subset, so per-subset weights are plain sigma products.
cplx lebesgue_poisson_integral(const SetFunction& G, const SiteSpace& space, Mask window_local);

// k(eta) = (sum_{gamma superset eta} mu(gamma)) / prod_{x in eta} sigma_x.
SetFunction correlation_from_measure(const SetFunction& mu, const SiteSpace& space);
// mu(gamma) = sum_{xi subset window\gamma} (-1)^{|xi|} k(gamma+xi) prod_{x in gamma+xi} sigma_x.
// Signed output flags a k that is not a correlation function of any measure.
SetFunction measure_from_correlation(const SetFunction& k, const SiteSpace& space);

// L(theta); the role tag picks the route:
//   measure:                 sum_gamma mu(gamma) prod_{x in gamma} (1 + theta_x)
//   correlation/coefficients: sum_eta k(eta) prod_{x in eta} theta_x sigma_x
cplx bogoliubov_eval(const SetFunction& L_source, const SiteSpace& space, const Field& theta);

// delta L / delta theta(x) = sigma_x^{-1} d/dtheta_x L(theta), for one site.
cplx bogoliubov_site_derivative(const SetFunction& L_source, const SiteSpace& space, const Field& theta,
                                int site);

// Table eta -> D^{|eta|}L(theta0; eta).  Computed two ways that must agree:
// (a) multilinear extraction from evaluations L(theta0 + 1_xi),
// (b) the shift formula sum_{xi} k(eta+xi) e(theta0, xi) sigma(xi).
SetFunction variational_derivatives(const SetFunction& L_source, const SiteSpace& space, const Field& theta0);

// |LHS - RHS| of the disjoint-split identity
//   sum_{eta,xi disjoint} G(eta+xi) H(xi,eta) lam(eta) lam(xi)
//     = sum_eta G(eta) lam(eta) sum_{xi subset eta} H(xi, eta\xi).
// H takes window-local masks (xi, eta).
using PairTable = std::function<cplx(Mask, Mask)>;
double star_identity_residual(const SetFunction& G, const PairTable& H, const SiteSpace& space);
// Same residual, also reporting |LHS| so callers can form a relative error.
double star_identity_residual_scaled(const SetFunction& G, const PairTable& H, const SiteSpace& space,
                                     double* lhs_abs);

struct OccupationResult {
  double direct = 0;           // sum of mu over configurations meeting the counts
  double via_derivative = 0;   // coefficient extraction from L(sum z_i 1_Bi - 1_B)
};
// P(|gamma ^ block_i| = count_i for all i); blocks are disjoint local masks.
OccupationResult occupation_probability(const SetFunction& mu, const SiteSpace& space,
                                        const std::vector<Mask>& blocks, const std::vector<int>& counts);

struct RuelleReport {
  bool pass = false;
  Mask witness = 0;           // first violating subset when pass is false
  double worst_margin = 0;    // max over eta of |k(eta)| - (|eta|!)^{1-eps} a^{|eta|}
  int growth_samples = 0;     // only for eps = 1 on pass
  double max_growth_ratio = 0;  // max |L(theta)| / prod(1 + a |theta| sigma)
};
// Checks |k(eta)| <= (|eta|!)^{1-eps} a^{|eta|} for every subset; for eps = 1
// additionally samples the induced growth bound |L(theta)| <= prod(1+a|theta_x|sigma_x).
RuelleReport ruelle_bound_check(const SetFunction& k, const SiteSpace& space, double a, double eps,
                                int n_theta_samples = 200, std::uint64_t seed = 1);

struct DerivativeBoundReport {
  double max_ratio = 0;  // max over eta of |D(theta0;eta)| / (|eta|! (e/r)^|eta| S_hat(r))
  double s_hat = 0;
  bool pass = false;
};
// |D^{|eta|}L(theta0;eta)| <= |eta|! (e/r)^{|eta|} S_hat(r) with the computable
// corner bound S_hat(r) = sum_xi |k(xi)| lam(xi) prod_{x in xi}(|theta0_x| + r/sigma_x),
// which dominates the sup of |L| over the L1 ball of radius r around theta0.
// The exact sup itself is not computable in general and is not asserted.
DerivativeBoundReport derivative_bound_check(const SetFunction& L_source, const SiteSpace& space,
                                             const Field& theta0, double r);

// Internal helper shared with the solver: coefficient table (role
// coefficients, entries k(eta)) of the functional described by L_source.
SetFunction functional_coefficients(const SetFunction& L_source, const SiteSpace& space);

}  // namespace bogo

#endif
