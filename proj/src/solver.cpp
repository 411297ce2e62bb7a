#include "bogo/solver.hpp"

#include <cmath>

#include "bogo/rng.hpp"

namespace bogo {

namespace {
constexpr double kE = 2.718281828459045235360287471353;
}

double ent_norm_upper_bound(const SetFunction& coeffs, double alpha) {
  if (!(alpha > 0)) fail(Errc::invalid_argument, "ent_norm_upper_bound: alpha must be positive");
  double acc = 0;
  for (Mask m = 0; m < coeffs.table_size(); ++m)
    acc += std::abs(coeffs[m]) * std::pow(kE * alpha, -popcount(m));
  return acc;
}

SetFunction apply_J(const SetFunction& coeffs, const SiteSpace& space, const PairPotential& pot, int jobs) {
  int n = coeffs.window_size();
  if (n != space.size() || static_cast<Mask>(coeffs.window_mask()) != space.full_mask())
    fail(Errc::invalid_argument, "apply_J: coefficient table must live on the full space");
  space.check_enumerable(n);
  const auto& w = coeffs.window();
  auto lam = sigma_products(space, w);

  std::vector<cplx> c(coeffs.values().begin(), coeffs.values().end());
  for (Mask m = 0; m < c.size(); ++m) c[m] *= lam[m];

  std::vector<double> nodes, weights;
  gauss_legendre_01((n + 1) / 2 + 1, nodes, weights);

  // evals[xi] accumulates (JL)(1_xi) = sum_{x in xi} sigma_x int_0^1 L(u_x(t)) dt
  std::vector<std::vector<cplx>> per_site(n);
  parallel_for(static_cast<std::size_t>(n), jobs, [&](std::size_t jb, std::size_t je) {
    for (std::size_t j = jb; j < je; ++j) {
      int x = w[j];
      std::vector<cplx> acc(c.size(), cplx(0, 0));
      std::vector<cplx> lo(n), hi(n);
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        double t = nodes[q];
        for (int jj = 0; jj < n; ++jj) {
          double m_xy = pot.mayer(x, w[jj]);
          lo[jj] = cplx(m_xy - 1.0, 0);            // site outside xi: u = m - 1
          hi[jj] = cplx((1.0 + t) * m_xy - 1.0, 0);  // site inside xi: u = (1+t) m - 1
        }
        hi[j] = lo[j] = cplx(-1, 0);  // diagonal Mayer factor is an exact 0
        std::vector<cplx> T = eval_multilinear_cube(c, lo, hi);
        for (Mask xi = 0; xi < acc.size(); ++xi) acc[xi] += weights[q] * T[xi];
      }
      per_site[j] = std::move(acc);
    }
  });

  std::vector<cplx> evals(c.size(), cplx(0, 0));
  for (int j = 0; j < n; ++j) {
    Mask bit = Mask(1) << j;
    double s = space.sigma[w[j]];
    for (Mask xi = 0; xi < evals.size(); ++xi)
      if (xi & bit) evals[xi] += s * per_site[j][xi];
  }

  subset_mobius(evals, n);
  SetFunction out(coeffs.window(), Role::coefficients);
  for (Mask m = 0; m < evals.size(); ++m) out[m] = evals[m] / lam[m];
  return out;
}

std::pair<SetFunction, ContractionReport> fixed_point_solve(const SiteSpace& space, const PairPotential& pot,
                                                            double tol, int max_iter,
                                                            const SetFunction* init, double alpha,
                                                            int jobs) {
  double t0 = wall_time_s();
  if (!pot.positive_off_diagonal())
    fail(Errc::invalid_argument, "fixed_point_solve: requires a positive pair potential");
  if (!(tol > 0)) fail(Errc::invalid_argument, "fixed_point_solve: tol must be positive");
  double c_beta = mayer_norm(pot, space);
  if (alpha <= 0) alpha = 1.0 / c_beta;
  double rate = std::exp(alpha * c_beta) / alpha;
  ContractionReport rep;
  rep.alpha = alpha;
  rep.c_beta = c_beta;
  rep.rate_bound = rate;
  if (rate >= 1.0)
    fail(Errc::regime, "outside uniqueness regime: e^{alpha C}/alpha = " + std::to_string(rate) +
                           " >= 1 at C(beta) = " + std::to_string(c_beta));

  SetFunction cur = SetFunction::full(space, Role::coefficients);
  if (init != nullptr) {
    if (init->table_size() != cur.table_size())
      fail(Errc::invalid_argument, "fixed_point_solve: init table has the wrong window");
    cur.mutable_values().assign(init->values().begin(), init->values().end());
  } else {
    cur[0] = cplx(1, 0);  // L == 1
  }

  int n = cur.window_size();
  std::vector<double> weight(cur.table_size());
  for (Mask m = 0; m < cur.table_size(); ++m) weight[m] = std::pow(kE * alpha, -popcount(m));

  for (int it = 1; it <= max_iter; ++it) {
    SetFunction next = apply_J(cur, space, pot, jobs);
    next[0] += cplx(1, 0);
    double delta = 0;
    for (Mask m = 0; m < cur.table_size(); ++m)
      delta = std::max(delta, std::abs(next[m] - cur[m]) * weight[m]);
    if (!rep.deltas.empty() && rep.deltas.back() > 0)
      rep.observed_ratio_max = std::max(rep.observed_ratio_max, delta / rep.deltas.back());
    rep.deltas.push_back(delta);
    rep.iterations = it;
    rep.final_delta = delta;
    cur = std::move(next);
    if (delta <= tol) {
      rep.converged = true;
      rep.wall_time_s = wall_time_s() - t0;
      (void)n;
      return {std::move(cur), std::move(rep)};
    }
  }
  fail(Errc::no_convergence, "fixed_point_solve: no convergence after " + std::to_string(max_iter) +
                                 " iterations (last delta " + std::to_string(rep.final_delta) + ")");
}

ContractionReport contraction_certificate(const SiteSpace& space, const PairPotential& pot, double alpha,
                                          int n_pairs, std::uint64_t seed, int jobs) {
  if (!(alpha > 0)) fail(Errc::invalid_argument, "contraction_certificate: alpha must be positive");
  ContractionReport rep;
  rep.alpha = alpha;
  rep.c_beta = mayer_norm(pot, space);
  rep.rate_bound = std::exp(alpha * rep.c_beta) / alpha;
  Philox rng(seed);
  for (int p = 0; p < n_pairs; ++p) {
    // J is linear, so a random difference table is as good as a random pair
    SetFunction diff = SetFunction::full(space, Role::coefficients);
    for (Mask m = 0; m < diff.table_size(); ++m) diff[m] = cplx(rng.normal(), rng.normal());
    double denom = ent_norm_upper_bound(diff, alpha);
    SetFunction jd = apply_J(diff, space, pot, jobs);
    double numer = ent_norm_upper_bound(jd, alpha);
    rep.empirical_ratio_max = std::max(rep.empirical_ratio_max, numer / denom);
  }
  rep.empirical_ok = rep.empirical_ratio_max <= rep.rate_bound * (1.0 + 1e-12);
  return rep;
}

}  // namespace bogo
