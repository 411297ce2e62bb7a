#include "bogo/config_calculus.hpp"

#include <cmath>

#include "bogo/rng.hpp"

namespace bogo {

namespace {

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// theta restricted to the window as a contiguous point vector
std::vector<cplx> window_point(const SetFunction& t, const Field& theta) {
  std::vector<cplx> p(t.window_size());
  for (int j = 0; j < t.window_size(); ++j) p[j] = theta.value[t.window()[j]];
  return p;
}

}  // namespace

cplx k_transform(const SetFunction& G, Mask gamma_local) {
  if (gamma_local >= G.table_size()) fail(Errc::domain, "k_transform: configuration outside the table window");
  cplx acc(0, 0);
  for_each_subset(gamma_local, [&](Mask eta) { acc += G[eta]; });
  return acc;
}

SetFunction k_transform_table(const SetFunction& G) {
  SetFunction F(G.window(), Role::observable);
  F.mutable_values().assign(G.values().begin(), G.values().end());
  subset_zeta(F.mutable_values(), G.window_size());
  return F;
}

SetFunction k_inverse(const SetFunction& F) {
  SetFunction G(F.window(), Role::quasi_observable);
  G.mutable_values().assign(F.values().begin(), F.values().end());
  subset_mobius(G.mutable_values(), F.window_size());
  return G;
}

cplx coherent_state(const Field& f, Mask eta) {
  cplx prod(1, 0);
  for (int j = 0; j < f.size(); ++j)
    if (eta & (Mask(1) << j)) prod *= f.value[j];
  return prod;
}

cplx lebesgue_poisson_integral(const SetFunction& G, const SiteSpace& space, Mask window_local) {
  if (window_local >= G.table_size())
    fail(Errc::domain, "lebesgue_poisson_integral: region outside the table window");
  auto lam = sigma_products(space, G.window());
  cplx acc(0, 0);
  for_each_subset(window_local, [&](Mask eta) { acc += G[eta] * lam[eta]; });
  return acc;
}

SetFunction correlation_from_measure(const SetFunction& mu, const SiteSpace& space) {
  mu.validate_measure();
  SetFunction k(mu.window(), Role::correlation);
  k.mutable_values().assign(mu.values().begin(), mu.values().end());
  superset_zeta(k.mutable_values(), mu.window_size());  // rho(eta) = sum_{gamma >= eta} mu(gamma)
  auto lam = sigma_products(space, mu.window());
  for (Mask m = 0; m < k.table_size(); ++m) k[m] /= lam[m];
  return k;
}

SetFunction measure_from_correlation(const SetFunction& k, const SiteSpace& space) {
  k.validate_correlation();
  SetFunction mu(k.window(), Role::measure);
  auto lam = sigma_products(space, k.window());
  for (Mask m = 0; m < mu.table_size(); ++m) mu[m] = k[m] * lam[m];  // rho weights
  superset_mobius(mu.mutable_values(), k.window_size());
  return mu;
}

cplx bogoliubov_eval(const SetFunction& L_source, const SiteSpace& space, const Field& theta) {
  theta.check_finite();
  auto point = window_point(L_source, theta);
  if (L_source.role() == Role::measure) {
    for (cplx& p : point) p += 1.0;  // prod (1 + theta)
    return eval_multilinear(L_source.values(), point);
  }
  if (L_source.role() == Role::correlation || L_source.role() == Role::coefficients) {
    std::vector<cplx> coeff(L_source.values().begin(), L_source.values().end());
    auto lam = sigma_products(space, L_source.window());
    for (Mask m = 0; m < coeff.size(); ++m) coeff[m] *= lam[m];
    return eval_multilinear(coeff, point);
  }
  fail(Errc::invalid_argument, "bogoliubov_eval: source must be a measure, correlation or coefficient table");
}

cplx bogoliubov_site_derivative(const SetFunction& L_source, const SiteSpace& space, const Field& theta,
                                int site) {
  theta.check_finite();
  int j_local = -1;
  for (int j = 0; j < L_source.window_size(); ++j)
    if (L_source.window()[j] == site) j_local = j;
  if (j_local < 0) fail(Errc::domain, "site outside the table window");
  Mask bit = Mask(1) << j_local;

  auto point = window_point(L_source, theta);
  std::vector<cplx> coeff(L_source.values().begin(), L_source.values().end());
  auto lam = sigma_products(space, L_source.window());
  if (L_source.role() == Role::measure) {
    for (cplx& p : point) p += 1.0;
  } else if (L_source.role() == Role::correlation || L_source.role() == Role::coefficients) {
    for (Mask m = 0; m < coeff.size(); ++m) coeff[m] *= lam[m];
  } else {
    fail(Errc::invalid_argument, "bogoliubov_site_derivative: unsupported role");
  }
  // d/dtheta_x of a per-site-affine polynomial: keep monomials containing x
  std::vector<cplx> reduced(coeff.size() >> 1);
  std::vector<cplx> rpoint;
  Mask below = bit - 1;
  for (Mask m = 0; m < reduced.size(); ++m) {
    Mask full = ((m & ~below) << 1) | bit | (m & below);
    reduced[m] = coeff[full];
  }
  for (int j = 0; j < L_source.window_size(); ++j)
    if (j != j_local) rpoint.push_back(point[j]);
  cplx d = eval_multilinear(reduced, rpoint);
  return d / space.sigma[site];
}

SetFunction functional_coefficients(const SetFunction& L_source, const SiteSpace& space) {
  if (L_source.role() == Role::measure) return correlation_from_measure(L_source, space);
  if (L_source.role() == Role::correlation || L_source.role() == Role::coefficients) {
    SetFunction k(L_source.window(), Role::coefficients);
    k.mutable_values().assign(L_source.values().begin(), L_source.values().end());
    return k;
  }
  fail(Errc::invalid_argument, "functional source must be a measure, correlation or coefficient table");
}

SetFunction variational_derivatives(const SetFunction& L_source, const SiteSpace& space, const Field& theta0) {
  theta0.check_finite();
  int n = L_source.window_size();
  auto lam = sigma_products(space, L_source.window());

  // route (a): evaluate L at theta0 + 1_xi for all xi, then Moebius.
  // L is affine in each site value, so the alternating sum over xi subset eta
  // equals the mixed partial derivative d^{|eta|}L / dtheta_eta exactly.
  SetFunction k = functional_coefficients(L_source, space);
  std::vector<cplx> coeff(k.values().begin(), k.values().end());
  for (Mask m = 0; m < coeff.size(); ++m) coeff[m] *= lam[m];
  auto p0 = window_point(k, theta0);
  std::vector<cplx> p1(p0);
  for (cplx& v : p1) v += 1.0;
  std::vector<cplx> evals = eval_multilinear_cube(coeff, p0, p1);
  subset_mobius(evals, n);
  SetFunction via_eval(L_source.window(), Role::coefficients);
  for (Mask m = 0; m < evals.size(); ++m) via_eval[m] = evals[m] / lam[m];

  // route (b): D(theta0; eta) = sum_{xi disjoint} k(eta+xi) e(theta0,xi) lam(xi),
  // realized as a weighted superset fold.
  std::vector<cplx> shift(k.values().begin(), k.values().end());
  for (Mask m = 0; m < shift.size(); ++m) shift[m] *= lam[m];
  for (int j = 0; j < n; ++j) {
    Mask bit = Mask(1) << j;
    for (Mask m = 0; m < shift.size(); ++m)
      if (!(m & bit)) shift[m] += p0[j] * shift[m | bit];
  }
  double scale = 0;
  for (Mask m = 0; m < shift.size(); ++m) {
    shift[m] /= lam[m];
    scale = std::max(scale, std::abs(shift[m]));
  }
  for (Mask m = 0; m < shift.size(); ++m)
    if (std::abs(via_eval[m] - shift[m]) > 1e-10 * std::max(1.0, scale))
      fail(Errc::assertion, "variational_derivatives: extraction and shift routes disagree");
  return via_eval;
}

double star_identity_residual_scaled(const SetFunction& G, const PairTable& H, const SiteSpace& space,
                                     double* lhs_abs) {
  int n = G.window_size();
  space.check_enumerable(n);
  auto lam = sigma_products(space, G.window());
  Mask all = (Mask(1) << n) - 1u;
  cplx lhs(0, 0), rhs(0, 0);
  for (Mask eta = 0; eta <= all; ++eta) {
    Mask rest = all & ~eta;
    cplx inner(0, 0);
    for_each_subset(rest, [&](Mask xi) { inner += G[eta | xi] * H(xi, eta) * lam[xi]; });
    lhs += inner * lam[eta];
    cplx split(0, 0);
    for_each_subset(eta, [&](Mask xi) { split += H(xi, eta & ~xi); });
    rhs += G[eta] * split * lam[eta];
  }
  if (lhs_abs != nullptr) *lhs_abs = std::abs(lhs);
  return std::abs(lhs - rhs);
}

double star_identity_residual(const SetFunction& G, const PairTable& H, const SiteSpace& space) {
  return star_identity_residual_scaled(G, H, space, nullptr);
}

OccupationResult occupation_probability(const SetFunction& mu, const SiteSpace& space,
                                        const std::vector<Mask>& blocks, const std::vector<int>& counts) {
  mu.validate_measure();
  if (blocks.size() != counts.size()) fail(Errc::invalid_argument, "occupation: blocks/counts size mismatch");
  Mask all_blocks = 0;
  for (Mask b : blocks) {
    if (b >= mu.table_size()) fail(Errc::domain, "occupation: block outside window");
    if (b & all_blocks) fail(Errc::invalid_argument, "occupation: blocks must be disjoint");
    all_blocks |= b;
  }
  for (int c : counts)
    if (c < 0) fail(Errc::invalid_argument, "occupation: counts must be non-negative");

  OccupationResult out;
  for (Mask g = 0; g < mu.table_size(); ++g) {
    bool match = true;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if (popcount(g & blocks[i]) != counts[i]) match = false;
    if (match) out.direct += mu[g].real();
  }

  // Route two: Taylor coefficients of z -> L(sum_i z_i 1_Bi - 1_B) at z = 0.
  // Expanding L around -1_B leaves exactly the subsets inside B, and the
  // monomial prod z_i^{count_i} collects those with the prescribed counts.
  Field theta0 = Field::zeros(space.size());
  for (int j = 0; j < mu.window_size(); ++j)
    if (all_blocks & (Mask(1) << j)) theta0.value[mu.window()[j]] = cplx(-1, 0);
  SetFunction d = variational_derivatives(mu, space, theta0);
  auto lam = sigma_products(space, mu.window());
  for_each_subset(all_blocks, [&](Mask eta) {
    bool match = true;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if (popcount(eta & blocks[i]) != counts[i]) match = false;
    if (match) out.via_derivative += (d[eta] * lam[eta]).real();
  });
  return out;
}

RuelleReport ruelle_bound_check(const SetFunction& k, const SiteSpace& space, double a, double eps,
                                int n_theta_samples, std::uint64_t seed) {
  if (!(a > 0)) fail(Errc::invalid_argument, "ruelle_bound_check: a must be positive");
  if (!(eps > 0) || eps > 1) fail(Errc::invalid_argument, "ruelle_bound_check: eps must lie in (0,1]");
  RuelleReport rep;
  rep.pass = true;
  rep.worst_margin = -1e300;
  for (Mask m = 0; m < k.table_size(); ++m) {
    int c = popcount(m);
    double bound = std::pow(factorial(c), 1.0 - eps) * std::pow(a, c);
    double margin = std::abs(k[m]) - bound;
    if (margin > rep.worst_margin) rep.worst_margin = margin;
    if (margin > 1e-12 * std::max(1.0, bound)) {
      rep.pass = false;
      rep.witness = m;
      return rep;
    }
  }
  if (eps == 1.0) {
    // classical case: the coefficient bound forces |L(theta)| <= prod(1 + a|theta_x|sigma_x)
    Philox rng(seed);
    rep.growth_samples = n_theta_samples;
    for (int s = 0; s < n_theta_samples; ++s) {
      Field theta = Field::zeros(space.size());
      double scale = std::exp(rng.uniform(-2.0, 1.5));
      for (auto& v : theta.value) v = scale * cplx(rng.normal(), rng.normal());
      double lhs = std::abs(bogoliubov_eval(k, space, theta));
      double bound = 1;
      for (int j = 0; j < k.window_size(); ++j) {
        int x = k.window()[j];
        bound *= 1.0 + a * std::abs(theta.value[x]) * space.sigma[x];
      }
      rep.max_growth_ratio = std::max(rep.max_growth_ratio, lhs / bound);
    }
    if (rep.max_growth_ratio > 1.0 + 1e-12) rep.pass = false;
  }
  return rep;
}

DerivativeBoundReport derivative_bound_check(const SetFunction& L_source, const SiteSpace& space,
                                             const Field& theta0, double r) {
  if (!(r > 0)) fail(Errc::invalid_argument, "derivative_bound_check: r must be positive");
  DerivativeBoundReport rep;
  SetFunction k = functional_coefficients(L_source, space);
  auto lam = sigma_products(space, k.window());
  double s_hat = 0;
  for (Mask m = 0; m < k.table_size(); ++m) {
    double corner = 1;
    for (int j = 0; j < k.window_size(); ++j) {
      int x = k.window()[j];
      if (m & (Mask(1) << j)) corner *= std::abs(theta0.value[x]) + r / space.sigma[x];
    }
    s_hat += std::abs(k[m]) * lam[m] * corner;
  }
  rep.s_hat = s_hat;
  SetFunction d = variational_derivatives(L_source, space, theta0);
  const double e = 2.718281828459045235360287471353;
  for (Mask m = 0; m < d.table_size(); ++m) {
    int c = popcount(m);
    double bound = factorial(c) * std::pow(e / r, c) * s_hat;
    rep.max_ratio = std::max(rep.max_ratio, std::abs(d[m]) / bound);
  }
  rep.pass = rep.max_ratio <= 1.0 + 1e-12;
  return rep;
}

}  // namespace bogo
