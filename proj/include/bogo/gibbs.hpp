#ifndef BOGO_GIBBS_HPP
#define BOGO_GIBBS_HPP

#include <functional>

#include "bogo/config_calculus.hpp"
#include "bogo/potential.hpp"

namespace bogo {

// mu(gamma) = Z^{-1} e^{-beta E(gamma)} prod_{x in gamma} sigma_x, exactly
// normalized over all subsets of the space.
SetFunction gibbs_measure(const SiteSpace& space, const PairPotential& pot);

// |LHS - RHS| of the finite-space GNZ balance for a test table H(x, gamma):
//   sum_gamma mu(gamma) sum_{x in gamma} H(x, gamma\{x})
//     = sum_x sigma_x sum_{gamma not containing x} mu(gamma) H(x, gamma) e^{-beta W({x},gamma)}.
// Zero to rounding exactly when mu is the Gibbs table above.
using SiteConfigTable = std::function<cplx(int, Mask)>;
double gnz_residual(const SetFunction& mu, const SiteSpace& space, const PairPotential& pot,
                    const SiteConfigTable& H);

enum class BogoForm { i, ii, iii };

// Residual of the equilibrium functional equation in one of its three forms.
// theta is the base field; forms ii and iii additionally need the increment
// field f.
//
// Form (i) in the finite setting, with delta/delta theta(x) = sigma_x^{-1} d/dtheta_x:
//   delta L(theta)/delta theta(x) = L((1+theta)(e^{-beta phi(x,.)}-1) + theta).
//
// Why the diagonal convention e^{-beta phi(x,x)} := 0 makes this exact:
// write m_y = e^{-beta phi(x,y)}.  The shifted field has per-site factors
// 1 + shifted_y = (1+theta_y) m_y, so evaluating L at it multiplies each
// configuration's weight by prod_{y in gamma} m_y.  With m_x = 0 every
// configuration containing x is annihilated, which is precisely the
// indicator 1_{x not in gamma} of the GNZ balance; for the remaining
// configurations prod_{y in gamma} m_y = e^{-beta W({x},gamma)} (finitely
// many factors, with an infinite energy giving an exact zero on both
// sides).  Combining with mu(gamma + x) = sigma_x e^{-beta W({x},gamma)} mu(gamma)
// for the Gibbs weights gives equality of LHS and RHS site by site.
double bogoliubov_equation_residual(const SetFunction& L_source, const SiteSpace& space,
                                    const PairPotential& pot, const Field& theta, BogoForm form,
                                    const Field* f = nullptr);

// Gauss-Legendre nodes/weights on [0,1], exact for polynomial degree 2n-1.
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace bogo

#endif
