#include "bogo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "bogo/gcmc.hpp"
#include "bogo/harness.hpp"
#include "bogo/hierarchy.hpp"
#include "bogo/rng.hpp"
#include "bogo/sde.hpp"
#include "bogo/solver.hpp"

namespace bogo {

namespace {

constexpr double kE = 2.718281828459045235360287471353;
constexpr double kPi = 3.14159265358979323846;

SiteSpace random_space(Philox& rng, int n) {
  SiteSpace s = SiteSpace::line(n, 0.5, 1.0);
  for (int i = 0; i < n; ++i) s.sigma[i] = rng.uniform(0.2, 1.2);
  return s;
}

PairPotential random_potential(Philox& rng, const SiteSpace& space, double beta_hi, bool allow_core) {
  int n = space.size();
  std::vector<std::vector<ExtReal>> phi(n, std::vector<ExtReal>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      ExtReal v{rng.uniform(-0.4, 1.2), false};
      if (allow_core && i != j && rng.uniform() < 0.05) v = ExtReal::infinite();
      if (i == j) v = {0, false};
      phi[i][j] = phi[j][i] = v;
    }
  return PairPotential::from_matrix(std::move(phi), rng.uniform(0.1, beta_hi));
}

SetFunction random_table(Philox& rng, const SiteSpace& space, Role role, double radius,
                         bool nonnegative = false) {
  SetFunction t = SetFunction::full(space, role);
  for (Mask m = 0; m < t.table_size(); ++m) {
    if (nonnegative)
      t[m] = cplx(radius * rng.uniform(), 0);
    else
      t[m] = radius * cplx(rng.normal(), rng.normal());
  }
  return t;
}

Field random_field(Philox& rng, int n, double radius) {
  Field f = Field::zeros(n);
  for (auto& v : f.value) v = radius * cplx(rng.normal(), rng.normal());
  return f;
}

double rel_diff_tables(const SetFunction& a, const SetFunction& b) {
  double scale = 1;
  for (Mask m = 0; m < a.table_size(); ++m)
    scale = std::max({scale, std::abs(a[m]), std::abs(b[m])});
  double worst = 0;
  for (Mask m = 0; m < a.table_size(); ++m) worst = std::max(worst, std::abs(a[m] - b[m]));
  return worst / scale;
}

struct Timer {
  double t0 = wall_time_s();
  double elapsed() const { return wall_time_s() - t0; }
};

}  // namespace

// ---------------------------------------------------------------------------
// Criterion 1: exact identities, 200 random instances, residuals <= 1e-12.
// ---------------------------------------------------------------------------
std::vector<Assertion> criterion_exact_identities(const VerifyOptions& opt) {
  Timer timer;
  RunManifest m;
  const double tol = 1e-12 * opt.tol_scale;
  Philox rng(opt.seed, 101);

  double worst_roundtrip = 0, worst_duality = 0, worst_star = 0, worst_m56 = 0;
  double worst_deriv_coeff = 0, worst_shift = 0, worst_occupation = 0;

  const int instances = 200;
  for (int inst = 0; inst < instances; ++inst) {
    int n = 2 + inst % 9;  // 2..10 sites
    SiteSpace space = random_space(rng, n);
    auto lam = sigma_products(space, SetFunction::full(space, Role::observable).window());

    // K / K^{-1} roundtrip on a random dense table
    SetFunction G = random_table(rng, space, Role::quasi_observable, 1.0);
    SetFunction back = k_inverse(k_transform_table(G));
    worst_roundtrip = std::max(worst_roundtrip, rel_diff_tables(G, back));

    // exact Gibbs measure and correlation table
    PairPotential pot = random_potential(rng, space, 1.0, false);
    SetFunction mu = gibbs_measure(space, pot);
    SetFunction k = correlation_from_measure(mu, space);

    // duality <G, rho> = <KG, mu>
    SetFunction KG = k_transform_table(G);
    cplx lhs(0, 0), rhs(0, 0);
    double scale = 1;
    for (Mask mm = 0; mm < G.table_size(); ++mm) {
      lhs += G[mm] * k[mm] * lam[mm];
      rhs += KG[mm] * mu[mm];
      scale = std::max(scale, std::abs(lhs));
    }
    worst_duality = std::max(worst_duality, std::abs(lhs - rhs) / scale);

    // star identity on nonnegative tables
    SetFunction Gpos = random_table(rng, space, Role::quasi_observable, 1.0, true);
    SetFunction H1 = random_table(rng, space, Role::quasi_observable, 1.0, true);
    SetFunction H2 = random_table(rng, space, Role::quasi_observable, 1.0, true);
    auto H = [&](Mask xi, Mask eta) { return H1[xi] * H2[eta]; };
    double lhs_abs = 0;
    double star = star_identity_residual_scaled(Gpos, H, space, &lhs_abs);
    worst_star = std::max(worst_star, star / std::max(1.0, lhs_abs));

    // (M.5)/(M.6) roundtrip
    SetFunction mu_back = measure_from_correlation(k, space);
    worst_m56 = std::max(worst_m56, rel_diff_tables(mu, mu_back));

    // derivative-coefficient identity at theta0 = 0
    SetFunction d0 = variational_derivatives(mu, space, Field::zeros(space.size()));
    worst_deriv_coeff = std::max(worst_deriv_coeff, rel_diff_tables(d0, k));

    // two-step shift identity
    Field t1 = random_field(rng, space.size(), 0.6);
    Field t2 = random_field(rng, space.size(), 0.6);
    Field t12 = t1;
    for (int i = 0; i < space.size(); ++i) t12.value[i] += t2.value[i];
    SetFunction d1 = variational_derivatives(mu, space, t1);
    SetFunction d12 = variational_derivatives(mu, space, t12);
    // fold: sum_xi d1(eta+xi) e(t2,xi) lam(xi)
    std::vector<cplx> foldv(d1.values().begin(), d1.values().end());
    for (Mask mm = 0; mm < foldv.size(); ++mm) foldv[mm] *= lam[mm];
    for (int j = 0; j < n; ++j) {
      Mask bit = Mask(1) << j;
      for (Mask mm = 0; mm < foldv.size(); ++mm)
        if (!(mm & bit)) foldv[mm] += t2.value[j] * foldv[mm | bit];
    }
    double local_scale = 1, local_worst = 0;
    for (Mask mm = 0; mm < foldv.size(); ++mm) {
      cplx expect = foldv[mm] / lam[mm];
      local_scale = std::max({local_scale, std::abs(expect), std::abs(d12[mm])});
      local_worst = std::max(local_worst, std::abs(expect - d12[mm]));
    }
    worst_shift = std::max(worst_shift, local_worst / local_scale);

    // occupation probability, two disjoint blocks
    Mask all = space.full_mask();
    Mask block_a = 0, block_b = 0;
    for (int j = 0; j < n; ++j) {
      double u = rng.uniform();
      if (u < 0.35)
        block_a |= Mask(1) << j;
      else if (u < 0.7)
        block_b |= Mask(1) << j;
    }
    (void)all;
    std::vector<Mask> blocks;
    std::vector<int> counts;
    if (block_a) {
      blocks.push_back(block_a);
      counts.push_back(rng.uniform_int(popcount(block_a) + 1));
    }
    if (block_b) {
      blocks.push_back(block_b);
      counts.push_back(rng.uniform_int(popcount(block_b) + 1));
    }
    if (!blocks.empty()) {
      OccupationResult occ = occupation_probability(mu, space, blocks, counts);
      worst_occupation = std::max(worst_occupation, std::abs(occ.direct - occ.via_derivative));
    }
  }

  m.assert_le("exact.k_roundtrip.max_rel_residual", worst_roundtrip, tol);
  m.assert_le("exact.duality.max_rel_residual", worst_duality, tol);
  m.assert_le("exact.star_identity.max_rel_residual", worst_star, tol);
  m.assert_le("exact.m5_m6_roundtrip.max_rel_residual", worst_m56, tol);
  m.assert_le("exact.derivative_coefficient.max_rel_residual", worst_deriv_coeff, tol);
  m.assert_le("exact.shift_identity.max_rel_residual", worst_shift, tol);
  m.assert_le("exact.occupation_dual_route.max_residual", worst_occupation, tol);
  m.assert_le("exact.wall_time_s", timer.elapsed(), 60.0);
  return m.assertions;
}

// ---------------------------------------------------------------------------
// Criterion 2: GNZ balance for exact Gibbs measures, 50 random potentials.
// ---------------------------------------------------------------------------
std::vector<Assertion> criterion_gnz(const VerifyOptions& opt) {
  Timer timer;
  RunManifest m;
  const double tol = 1e-12 * opt.tol_scale;
  Philox rng(opt.seed, 202);

  double worst = 0, mecke_worst = 0, control_best = 0;
  for (int inst = 0; inst < 50; ++inst) {
    int n = 3 + inst % 8;  // 3..10
    SiteSpace space = random_space(rng, n);
    PairPotential pot = random_potential(rng, space, 1.5, true);
    SetFunction mu = gibbs_measure(space, pot);

    // random bounded H(x, gamma) = a(x) * b(gamma), |entries| <= 1
    std::vector<cplx> a(n);
    for (auto& v : a) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    SetFunction b = random_table(rng, space, Role::quasi_observable, 0.5);
    auto H = [&](int x, Mask gamma) { return a[x] * b[gamma]; };
    worst = std::max(worst, gnz_residual(mu, space, pot, H));

    // Mecke case: zero potential
    PairPotential freepot =
        PairPotential::from_matrix(std::vector<std::vector<ExtReal>>(n, std::vector<ExtReal>(n)), 1.0);
    SetFunction mu_free = gibbs_measure(space, freepot);
    mecke_worst = std::max(mecke_worst, gnz_residual(mu_free, space, freepot, H));

    // negative control: 1% perturbation on one configuration
    if (inst < 10) {
      SetFunction bad = mu;
      Mask target = static_cast<Mask>(rng.uniform_int(static_cast<int>(bad.table_size())));
      bad[target] *= 1.01;
      cplx total(0, 0);
      for (Mask mm = 0; mm < bad.table_size(); ++mm) total += bad[mm];
      for (Mask mm = 0; mm < bad.table_size(); ++mm) bad[mm] /= total;
      control_best = std::max(control_best, gnz_residual(bad, space, pot, H));
    }
  }
  m.assert_le("gnz.gibbs.max_residual", worst, tol);
  m.assert_le("gnz.mecke.max_residual", mecke_worst, tol);
  m.assert_true("gnz.perturbed_negative_control", control_best > 1e-6,
                "max residual " + format_double(control_best));
  m.assert_le("gnz.wall_time_s", timer.elapsed(), 60.0);
  return m.assertions;
}

// ---------------------------------------------------------------------------
// Criterion 3: the equilibrium functional equation, forms i, ii, iii.
// ---------------------------------------------------------------------------
std::vector<Assertion> criterion_bogoliubov(const VerifyOptions& opt) {
  Timer timer;
  RunManifest m;
  const double tol = 1e-10 * opt.tol_scale;
  Philox rng(opt.seed, 303);

  double worst_i = 0, worst_ii = 0, worst_iii = 0, worst_free = 0;
  for (int inst = 0; inst < 30; ++inst) {
    int n = 3 + inst % 6;  // 3..8
    SiteSpace space = random_space(rng, n);
    PairPotential pot = random_potential(rng, space, 1.0, inst % 4 == 0);
    SetFunction mu = gibbs_measure(space, pot);
    Field theta = random_field(rng, n, 0.4);
    Field f = random_field(rng, n, 0.4);
    worst_i = std::max(worst_i, bogoliubov_equation_residual(mu, space, pot, theta, BogoForm::i));
    worst_ii = std::max(worst_ii, bogoliubov_equation_residual(mu, space, pot, theta, BogoForm::ii, &f));
    worst_iii = std::max(worst_iii, bogoliubov_equation_residual(mu, space, pot, theta, BogoForm::iii, &f));
  }

  // V == 0: the free functional satisfies form (i) with the shifted field
  // equal to theta off x and -1 at x
  {
    SiteSpace space = random_space(rng, 6);
    PairPotential freepot =
        PairPotential::from_matrix(std::vector<std::vector<ExtReal>>(6, std::vector<ExtReal>(6)), 1.0);
    SetFunction mu = gibbs_measure(space, freepot);
    Field theta = random_field(rng, 6, 0.5);
    worst_free = bogoliubov_equation_residual(mu, space, freepot, theta, BogoForm::i);
  }

  // continuum limit: sigma = z h, V == 0; site derivative converges to
  // L(theta) at first order in h
  double err_h[2] = {0, 0};
  double hs[2] = {0.1, 0.05};
  for (int c = 0; c < 2; ++c) {
    int n = static_cast<int>(std::lround(1.0 / hs[c]));
    SiteSpace space = SiteSpace::line(n, hs[c], 0.7);
    PairPotential freepot =
        PairPotential::from_matrix(std::vector<std::vector<ExtReal>>(n, std::vector<ExtReal>(n)), 1.0);
    SetFunction mu = gibbs_measure(space, freepot);
    Field theta = Field::zeros(n);
    for (int i = 0; i < n; ++i) theta.value[i] = 0.4 * std::sin(2 * kPi * space.pos[i][0]);
    cplx l_theta = bogoliubov_eval(mu, space, theta);
    double worst = 0;
    for (int x = 0; x < n; ++x)
      worst = std::max(worst, std::abs(bogoliubov_site_derivative(mu, space, theta, x) - l_theta));
    err_h[c] = worst;
  }
  double ratio = err_h[0] / err_h[1];

  m.assert_le("bogoliubov.form_i.max_residual", worst_i, tol);
  m.assert_le("bogoliubov.form_ii.max_residual", worst_ii, tol);
  m.assert_le("bogoliubov.form_iii.max_residual", worst_iii, tol);
  m.assert_le("bogoliubov.free_form_i.residual", worst_free, tol);
  m.assert_true("bogoliubov.continuum_first_order",
                ratio > 1.6 && ratio < 2.4,
                "error ratio h=0.1 vs h=0.05: " + format_double(ratio));
  m.assert_le("bogoliubov.wall_time_s", timer.elapsed(), 120.0);
  return m.assertions;
}

// ---------------------------------------------------------------------------
// Criterion 4: contraction fixed point, uniqueness at desk scale.
// ---------------------------------------------------------------------------
namespace {

// line space with constant sigma and a bump potential whose beta is tuned by
// bisection so that the Mayer norm hits the requested C
struct TunedModel {
  SiteSpace space;
  PairPotential pot;
  double c_beta;
};

TunedModel tuned_positive_model(int n, double c_target) {
  SiteSpace space = SiteSpace::line(n, 0.45, 1.0);
  for (auto& s : space.sigma) s = c_target / 2;
  RadialPotential bump = RadialPotential::bump(1.0, 1.0);
  double lo = 0, hi = 64;
  PairPotential pot = PairPotential::from_radial(bump, space, hi);
  for (int it = 0; it < 200; ++it) {
    double mid = (lo + hi) / 2;
    pot = PairPotential::from_radial(bump, space, mid);
    double c = mayer_norm(pot, space);
    if (c < c_target)
      lo = mid;
    else
      hi = mid;
  }
  pot = PairPotential::from_radial(bump, space, (lo + hi) / 2);
  double c = mayer_norm(pot, space);
  return {std::move(space), std::move(pot), c};
}

}  // namespace

std::vector<Assertion> criterion_contraction(const VerifyOptions& opt) {
  Timer timer;
  RunManifest m;
  const double tol = 1e-10;
  Philox rng(opt.seed, 404);

  double worst_pair_gap = 0, worst_gibbs_gap = 0, worst_ratio_margin = -1e300, worst_c_err = 0;
  bool all_converged = true;
  for (int inst = 0; inst < 10; ++inst) {
    double c_target = 0.1 + 0.25 * inst / 9.0;  // 0.1 .. 0.35
    TunedModel model = tuned_positive_model(10, c_target);
    worst_c_err = std::max(worst_c_err, std::abs(model.c_beta - c_target));

    auto [L1, rep1] = fixed_point_solve(model.space, model.pot, tol, 2000, nullptr, 0, opt.jobs);
    SetFunction free_init = SetFunction::full(model.space, Role::coefficients);
    for (Mask mm = 0; mm < free_init.table_size(); ++mm) {
      double prod = 1;
      for (int j = 0; j < model.space.size(); ++j)
        if (mm & (Mask(1) << j)) prod /= 1.0 + model.space.sigma[j];
      free_init[mm] = prod;
    }
    auto [L2, rep2] = fixed_point_solve(model.space, model.pot, tol, 2000, &free_init, 0, opt.jobs);
    all_converged = all_converged && rep1.converged && rep2.converged;

    double pair_gap = 0;
    for (Mask mm = 0; mm < L1.table_size(); ++mm)
      pair_gap = std::max(pair_gap, std::abs(L1[mm] - L2[mm]));
    worst_pair_gap = std::max(worst_pair_gap, pair_gap);

    SetFunction k_exact = correlation_from_measure(gibbs_measure(model.space, model.pot), model.space);
    double gibbs_gap = 0;
    for (Mask mm = 0; mm < L1.table_size(); ++mm)
      gibbs_gap = std::max(gibbs_gap, std::abs(L1[mm] - k_exact[mm]));
    worst_gibbs_gap = std::max(worst_gibbs_gap, gibbs_gap);

    worst_ratio_margin = std::max({worst_ratio_margin, rep1.observed_ratio_max - rep1.rate_bound,
                                   rep2.observed_ratio_max - rep2.rate_bound});
  }

  // refusal outside the uniqueness regime
  bool refused = false;
  std::string refusal_msg;
  try {
    TunedModel model = tuned_positive_model(10, 0.4);
    fixed_point_solve(model.space, model.pot, tol, 10, nullptr, 0, opt.jobs);
  } catch (const Error& e) {
    refused = e.code() == Errc::regime;
    refusal_msg = e.what();
  }

  m.assert_le("contraction.c_target_tuning_error", worst_c_err, 1e-6);
  m.assert_true("contraction.all_converged", all_converged);
  m.assert_le("contraction.two_init_gap", worst_pair_gap, 2 * tol * opt.tol_scale);
  m.assert_le("contraction.gibbs_oracle_gap", worst_gibbs_gap, 1e-8 * opt.tol_scale);
  m.assert_le("contraction.step_ratio_minus_bound", worst_ratio_margin, 1e-9);
  m.assert_true("contraction.refuses_outside_regime", refused, refusal_msg);
  m.assert_le("contraction.wall_time_s", timer.elapsed(), 300.0);
  return m.assertions;
}

// ---------------------------------------------------------------------------
// Criterion 5: grand-canonical Monte Carlo against its statistical oracles.
// ---------------------------------------------------------------------------
std::vector<Assertion> criterion_gcmc(const VerifyOptions& opt) {
  Timer timer;
  RunManifest m;

  // (a) ideal gas: particle count is Poisson(z V)
  {
    ChainConfig cfg;
    cfg.box = {1, 20.0};
    cfg.z = 1.0;
    cfg.beta = 1.0;
    cfg.pot = RadialPotential::gauss(0.0, 0.5, 1.0);
    cfg.n_sweeps = 100000;
    cfg.burn_in = 2000;
    cfg.thinning = 5;
    cfg.seed = opt.seed + 50;
    auto samples = run_gcmc(cfg);
    CorrelationEstimate est = estimate_correlations(samples, cfg.box, 2.0, 8);
    double mean_count = est.k1 * cfg.box.volume();
    double se_count = est.k1_se * cfg.box.volume();
    m.assert_le("gcmc.ideal_gas_count_dev_over_se",
                std::abs(mean_count - cfg.z * cfg.box.volume()) / se_count, 3.0);
    double worst_g = 0;
    for (std::size_t b = 0; b < est.g.size(); ++b)
      if (est.g_se[b] > 0) worst_g = std::max(worst_g, std::abs(est.g[b] - 1.0) / est.g_se[b]);
    m.assert_le("gcmc.ideal_gas_g_dev_over_se", worst_g, 3.0);
  }

  // (b) hard core: no pair ever below the core radius
  {
    ChainConfig cfg;
    cfg.box = {1, 12.0};
    cfg.z = 0.8;
    cfg.beta = 1.0;
    cfg.pot = RadialPotential::hardcore(0.3);
    cfg.n_sweeps = 30000;
    cfg.burn_in = 1000;
    cfg.thinning = 3;
    cfg.seed = opt.seed + 51;
    auto samples = run_gcmc(cfg);
    double min_dist = 1e300;
    for (const auto& s : samples)
      for (int i = 0; i < s.count(); ++i)
        for (int j = i + 1; j < s.count(); ++j)
          min_dist = std::min(min_dist, min_image_dist(s.pts[i], s.pts[j], cfg.box));
    m.assert_true("gcmc.hardcore_no_overlap", min_dist >= cfg.pot.core_radius(),
                  "min pair distance " + format_double(min_dist));
    CorrelationEstimate est = estimate_correlations(samples, cfg.box, 1.2, 8);
    double core_mass = 0;
    for (std::size_t b = 0; b < est.g.size(); ++b)
      if (est.bin_hi[b] <= cfg.pot.core_radius()) core_mass += std::abs(est.g[b]);
    m.assert_le("gcmc.hardcore_g_in_core", core_mass, 0.0);
  }

  // (c) low activity: g(r) -> e^{-beta V(r)}; z chosen so the O(z) Mayer
  // correction sits well below the statistical error
  {
    ChainConfig cfg;
    cfg.box = {1, 30.0};
    cfg.z = 0.05;
    cfg.beta = 1.0;
    cfg.pot = RadialPotential::bump(1.2, 1.5);
    cfg.n_sweeps = 90000;
    cfg.burn_in = 4000;
    cfg.thinning = 2;
    cfg.seed = opt.seed + 52;
    auto samples = run_gcmc(cfg);
    CorrelationEstimate est = estimate_correlations(samples, cfg.box, 1.5, 6);
    double worst = 0;
    for (std::size_t b = 0; b < est.g.size(); ++b) {
      double r_mid = 0.5 * (est.bin_lo[b] + est.bin_hi[b]);
      double expect = std::exp(-cfg.beta * cfg.pot.value(r_mid).value);
      if (est.g_se[b] > 0) worst = std::max(worst, std::abs(est.g[b] - expect) / (3 * est.g_se[b]));
    }
    m.assert_le("gcmc.low_activity_g_dev_over_3se", worst, 1.0);
  }

  // (d) statistical GNZ test: passes on-model, fails at the wrong activity
  {
    ChainConfig cfg;
    cfg.box = {1, 16.0};
    cfg.z = 0.4;
    cfg.beta = 1.0;
    cfg.pot = RadialPotential::bump(0.8, 1.2);
    cfg.n_sweeps = 50000;
    cfg.burn_in = 2000;
    cfg.thinning = 6;
    cfg.seed = opt.seed + 53;
    auto samples = run_gcmc(cfg);
    auto family = default_gnz_family(cfg.box, 1.2);
    GnzTestReport rep = gnz_statistical_test(samples, cfg, family);
    m.assert_true("gcmc.gnz_family_pass_fraction",
                  rep.pass, "fraction " + format_double(rep.pass_fraction));
    ChainConfig wrong = cfg;
    wrong.z = 1.2 * cfg.z;
    GnzTestReport bad = gnz_statistical_test(samples, wrong, family);
    m.assert_true("gcmc.gnz_wrong_activity_control", !bad.pass,
                  "fraction " + format_double(bad.pass_fraction));
  }

  m.assert_le("gcmc.wall_time_s", timer.elapsed(), 300.0);
  return m.assertions;
}

// ---------------------------------------------------------------------------
// Criterion 6: free dynamics against exactly solvable heat flow.
// ---------------------------------------------------------------------------
std::vector<Assertion> criterion_dynamics_free(const VerifyOptions& opt) {
  Timer timer;
  RunManifest m;

  // (a) single free particle: displacement variance per coordinate equals t
  {
    SdeConfig cfg;
    cfg.box = {1, 20.0};
    cfg.start = SdeConfig::Start::fixed;
    cfg.fixed_start = {Point{10.0, 0, 0}};
    cfg.beta = 1.0;
    cfg.pot = RadialPotential::gauss(0.0, 0.5, 1.0);
    cfg.dt = 1e-3;
    cfg.t_end = 0.5;
    cfg.n_replicas = 1200;
    cfg.force_cap = 100;
    cfg.seed = opt.seed + 60;
    cfg.record_times = {cfg.t_end};
    auto trajs = simulate_sde(cfg, opt.jobs);
    double mean = 0, var = 0;
    std::vector<double> disp;
    for (const auto& tr : trajs) {
      Point d = min_image_delta(tr.at_time(cfg.t_end).pts[0], cfg.fixed_start[0], cfg.box);
      disp.push_back(d[0]);
    }
    for (double v : disp) mean += v;
    mean /= disp.size();
    for (double v : disp) var += (v - mean) * (v - mean);
    var /= (disp.size() - 1);
    double se = var * std::sqrt(2.0 / (disp.size() - 1));
    m.assert_le("dynamics_free.sde_variance_dev_over_se", std::abs(var - cfg.t_end) / se, 3.0);
  }

  // (b) hierarchy heat flow against the analytic mode decay, order 2 in h.
  // For k1_0 = z + A cos(2 pi m x / L) the solution keeps the mode with
  // decay exp(-kappa t); the centered stencil's L-infinity error constant is
  // t kappa^2 h^2 / 12 times the amplitude, pinned here with margin as
  // C = A kappa^2 t_end.
  {
    double length = 8.0, z = 0.5, amp = 0.25, t_end = 0.2;
    int mode = 2;
    double kappa = std::pow(2 * kPi * mode / length, 2);
    RadialPotential freepot = RadialPotential::gauss(0.0, 0.1, 0.3);
    double errs[2] = {0, 0};
    int sizes[2] = {64, 128};
    double dt = 0.00125;  // CFL-safe for both grids; dt^4 term is negligible
    for (int c = 0; c < 2; ++c) {
      Grid1 grid{sizes[c], length};
      std::vector<double> k1(grid.n), k2(std::size_t(grid.n) * grid.n);
      for (int i = 0; i < grid.n; ++i) k1[i] = z + amp * std::cos(2 * kPi * mode * grid.x(i) / length);
      for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j) k2[std::size_t(i) * grid.n + j] = k1[i] * k1[j];
      HierarchyState init = HierarchyState::full(grid, k1, k2, Closure::zero);
      HierarchySolveConfig scfg;
      scfg.t_end = t_end;
      scfg.dt = dt;
      scfg.record_every = t_end;
      HierarchyTimeline tl = hierarchy_solve(init, freepot, 1.0, scfg);
      const HierarchyState& fin = tl.states.back();
      double err = 0;
      for (int i = 0; i < grid.n; ++i) {
        double exact = z + amp * std::exp(-0.5 * kappa * t_end) *
                               std::cos(2 * kPi * mode * grid.x(i) / length);
        err = std::max(err, std::abs(fin.k1_at(i) - exact));
      }
      errs[c] = err;

      if (c == 0) {
        // free flow keeps product form k2 = k1 (x) k1 to solver accuracy
        double prod_gap = 0;
        for (int i = 0; i < grid.n; ++i)
          for (int j = 0; j < grid.n; ++j)
            prod_gap = std::max(prod_gap,
                                std::abs(fin.k2_at(i, j) - fin.k1_at(i) * fin.k1_at(j)));
        m.assert_le("dynamics_free.product_form_preserved", prod_gap, 1e-8);
      }
    }
    double h0 = length / sizes[0];
    double bound = amp * kappa * kappa * t_end * (h0 * h0 + std::pow(dt, 4));
    m.assert_le("dynamics_free.heat_flow_linf_error", errs[0], bound);
    double order_ratio = errs[0] / errs[1];
    m.assert_true("dynamics_free.heat_flow_order2", order_ratio > 3.0 && order_ratio < 5.5,
                  "halving ratio " + format_double(order_ratio));
  }

  m.assert_le("dynamics_free.wall_time_s", timer.elapsed(), 180.0);
  return m.assertions;
}

// ---------------------------------------------------------------------------
// Criterion 7: interacting 1-D desk case, SDE vs hierarchy vs functional law.
// ---------------------------------------------------------------------------
std::vector<Assertion> criterion_dynamics_interacting(const VerifyOptions& opt) {
  Timer timer;
  RunManifest m;

  const double length = 8.0, z = 0.25, beta = 1.0;
  RadialPotential pot = RadialPotential::bump(1.5, 1.0);

  // SDE ensemble
  SdeConfig scfg;
  scfg.box = {1, length};
  scfg.start = SdeConfig::Start::poisson;
  scfg.z = z;
  scfg.beta = beta;
  scfg.pot = pot;
  scfg.dt = 5e-4;
  scfg.t_end = 0.5;
  scfg.n_replicas = 500;
  scfg.force_cap = 200;
  scfg.seed = opt.seed + 70;
  scfg.record_times = {0.1, 0.5};
  auto trajs = simulate_sde(scfg, opt.jobs);

  // hierarchy, translation-invariant storage, product closure
  Grid1 grid{64, length};
  HierarchyState init = HierarchyState::poisson(grid, z, Closure::product, true);
  HierarchySolveConfig hcfg;
  hcfg.t_end = 0.5;
  hcfg.dt = 0.005;
  hcfg.record_every = 0.025;
  HierarchyTimeline tl = hierarchy_solve(init, pot, beta, hcfg);

  double h = grid.h();
  for (double t : {0.1, 0.5}) {
    CorrelationEstimate est = empirical_correlations(trajs, scfg.box, t, 2.0, 8);
    const HierarchyState& hs = tl.at_time(t);

    // density: conserved by the dynamics; discretization allowance h^2 |k1''|
    double k1_allow = h * h * std::abs(hs.k1_value) * 0.1;
    m.assert_le("desk.k1_gap_t" + format_double(t), std::abs(est.k1 - hs.k1_value),
                3 * est.k1_se + k1_allow);

    // two-point function per bin; allowance h^2 max|c''| plus the closure
    // truncation scale beta A z^3
    double max_c2 = 0;
    for (int s = 0; s < grid.n; ++s) {
      double c2 = std::abs(hs.k2_sep[grid.wrap(s + 1)] - 2 * hs.k2_sep[s] + hs.k2_sep[grid.wrap(s - 1)]) /
                  (h * h);
      max_c2 = std::max(max_c2, c2);
    }
    double allowance = h * h * max_c2 + beta * 1.5 * z * z * z;
    double worst = 0;
    for (std::size_t b = 0; b < est.k2.size(); ++b) {
      double r_mid = 0.5 * (est.bin_lo[b] + est.bin_hi[b]);
      // average the hierarchy profile over the bin
      double acc = 0;
      int cnt = 0;
      for (int s = 0; s < grid.n; ++s) {
        double sep = std::abs(grid.sep(s, 0));
        if (sep >= est.bin_lo[b] && sep < est.bin_hi[b]) {
          acc += hs.k2_sep[s];
          ++cnt;
        }
      }
      if (cnt == 0) continue;
      acc /= cnt;
      double gap = std::abs(est.k2[b] - acc);
      double budget = 3 * est.k2_se[b] + allowance;
      worst = std::max(worst, gap / budget);
      (void)r_mid;
    }
    m.assert_le("desk.k2_gap_over_budget_t" + format_double(t), worst, 1.0);
  }

  // functional evolution residual with zero closure, monotone in z
  auto residual_at = [&](double zz) {
    HierarchyState i0 = HierarchyState::poisson(grid, zz, Closure::zero, true);
    HierarchyTimeline tz = hierarchy_solve(i0, pot, beta, hcfg);
    std::vector<double> theta(grid.n);
    for (int i = 0; i < grid.n; ++i) {
      double u = (grid.x(i) - length / 2) / 2.0;
      theta[i] = std::abs(u) < 1 ? 0.8 * std::exp(4.0 - 1.0 / ((1 - u) * (1 + u))) / std::exp(3.0) : 0.0;
    }
    return std::make_pair(functional_evolution_residual(tz, pot, theta, 0.1), tz);
  };
  auto [res_z, tl_z] = residual_at(z);
  auto [res_half, tl_half] = residual_at(z / 2);
  m.assert_le("desk.functional_residual_zero_closure", res_z, 0.05 * opt.tol_scale);
  m.assert_true("desk.functional_residual_monotone_in_z", res_half < res_z,
                format_double(res_half) + " vs " + format_double(res_z));

  // Hopf form agrees with the substituted functional residual
  std::vector<double> phi(grid.n), theta_sub(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    double u = (grid.x(i) - length / 2) / 2.0;
    phi[i] = std::abs(u) < 1 ? 0.5 * std::exp(4.0 - 1.0 / ((1 - u) * (1 + u))) / std::exp(3.0) : 0.0;
    theta_sub[i] = std::exp(phi[i]) - 1.0;
  }
  double hopf = hopf_residual(tl_z, pot, phi, 0.1);
  double func_sub = functional_evolution_residual(tl_z, pot, theta_sub, 0.1);
  m.assert_le("desk.hopf_matches_functional", std::abs(hopf - func_sub), 1e-8);

  m.assert_le("desk.wall_time_s", timer.elapsed(), 600.0);
  return m.assertions;
}

// ---------------------------------------------------------------------------
// Criterion 8: triangular structure of the quasi-observable generator and
// conservation laws along full timelines.
// ---------------------------------------------------------------------------
std::vector<Assertion> criterion_conservation(const VerifyOptions& opt) {
  Timer timer;
  RunManifest m;
  Philox rng(opt.seed, 808);

  RadialPotential pot = RadialPotential::bump(1.0, 1.0);
  Grid1 grid{48, 12.0};
  double eps = 4 * grid.h();

  auto random_quasi = [&]() {
    QuasiObservableGrid g;
    g.grid = grid;
    g.eps = eps;
    g.g0 = rng.normal();
    g.g1.resize(grid.n);
    g.g2.assign(std::size_t(grid.n) * grid.n, 0.0);
    for (int i = 0; i < grid.n; ++i) g.g1[i] = std::sin(2 * kPi * grid.x(i) / grid.length) + 0.3 * rng.normal();
    for (int i = 0; i < grid.n; ++i)
      for (int j = i; j < grid.n; ++j) {
        double v = std::abs(grid.sep(i, j)) <= eps ? 0.0 : rng.normal();
        g.g2[std::size_t(i) * grid.n + j] = v;
        g.g2[std::size_t(j) * grid.n + i] = v;
      }
    return g;
  };

  bool level0_zero = true, level1_independent = true, symmetric_out = true;
  for (int rep = 0; rep < 3; ++rep) {
    QuasiObservableGrid g = random_quasi();
    QuasiObservableGrid out = apply_H_hat(g, pot, 1.0);
    level0_zero = level0_zero && out.g0 == 0.0;
    // perturb levels 2 and 0: lower output levels must not change
    QuasiObservableGrid g2 = g;
    g2.g0 = rng.normal();
    for (int i = 0; i < grid.n; ++i)
      for (int j = i; j < grid.n; ++j) {
        double v = std::abs(grid.sep(i, j)) <= eps ? 0.0 : rng.normal();
        g2.g2[std::size_t(i) * grid.n + j] = v;
        g2.g2[std::size_t(j) * grid.n + i] = v;
      }
    QuasiObservableGrid out2 = apply_H_hat(g2, pot, 1.0);
    for (int i = 0; i < grid.n; ++i)
      if (out.g1[i] != out2.g1[i]) level1_independent = false;
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j)
        if (out.g2[std::size_t(i) * grid.n + j] != out.g2[std::size_t(j) * grid.n + i])
          symmetric_out = false;
  }
  m.assert_true("conservation.hhat_level0_zero", level0_zero);
  m.assert_true("conservation.hhat_level1_depends_on_level1_only", level1_independent);
  m.assert_true("conservation.hhat_level2_symmetric", symmetric_out);

  // full-mode interacting timeline: k0 == 1, k2 symmetric on every slice
  {
    Grid1 g{32, 8.0};
    std::vector<double> k1(g.n), k2(std::size_t(g.n) * g.n);
    for (int i = 0; i < g.n; ++i) k1[i] = 0.3 + 0.05 * std::cos(2 * kPi * g.x(i) / g.length);
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j) k2[std::size_t(i) * g.n + j] = k1[i] * k1[j];
    HierarchyState init = HierarchyState::full(g, k1, k2, Closure::product);
    HierarchySolveConfig cfg;
    cfg.t_end = 0.1;
    cfg.dt = 0.01;
    cfg.record_every = 0.02;
    HierarchyTimeline tl = hierarchy_solve(init, pot, 1.0, cfg);
    int violations = 0;
    for (const auto& s : tl.states) {
      if (s.k0 != 1.0) ++violations;
      for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
          if (s.k2[std::size_t(i) * g.n + j] != s.k2[std::size_t(j) * g.n + i]) ++violations;
    }
    m.assert_true("conservation.timeline_k0_and_symmetry",
                  violations == 0, std::to_string(violations) + " violations");
  }

  m.assert_le("conservation.wall_time_s", timer.elapsed(), 120.0);
  return m.assertions;
}

// ---------------------------------------------------------------------------
// Criterion 9: byte-identical reruns under a fixed seed.
// ---------------------------------------------------------------------------
std::vector<Assertion> criterion_reproducibility(const VerifyOptions& opt) {
  namespace fs = std::filesystem;
  Timer timer;
  RunManifest m;
  std::string base = opt.out_dir.empty() ? std::string("bogo_repro_tmp") : opt.out_dir + "/repro";

  std::vector<std::pair<std::string, std::string>> runs = {
      {"fixedpoint", R"({"seed": 11, "fixedpoint": {"space": {"n": 8, "sigma": 0.08},
        "potential": {"kind": "radial", "V": {"form": "bump", "amplitude": 1.0, "cutoff": 1.0}, "beta": 1.0},
        "spacing": 0.45, "tol": 1e-10, "max_iter": 500}})"},
      {"gcmc", R"({"seed": 12, "gcmc": {"box": {"dim": 1, "side": 12.0}, "z": 0.5, "beta": 1.0,
        "potential": {"kind": "radial", "V": {"form": "bump", "amplitude": 0.8, "cutoff": 1.0}, "beta": 1.0},
        "n_sweeps": 4000, "burn_in": 500, "thinning": 5, "bins": {"r_max": 1.5, "n": 6}}})"},
      {"sde", R"({"seed": 13, "sde": {"box": {"dim": 1, "side": 8.0}, "start": "poisson", "z": 0.3,
        "beta": 1.0, "potential": {"kind": "radial", "V": {"form": "bump", "amplitude": 1.0, "cutoff": 1.0}, "beta": 1.0},
        "dt": 0.001, "t_end": 0.05, "n_replicas": 120, "force_cap": 100, "record_times": [0.05],
        "bins": {"r_max": 1.5, "n": 4}}})"},
      {"hierarchy", R"({"seed": 14, "hierarchy": {"grid": {"n": 32, "length": 8.0}, "mode": "invariant",
        "closure": "product", "z": 0.3, "beta": 1.0,
        "potential": {"kind": "radial", "V": {"form": "bump", "amplitude": 1.0, "cutoff": 1.0}, "beta": 1.0},
        "dt": 0.005, "t_end": 0.05, "record_every": 0.025}})"}};

  for (const auto& [name, cfg] : runs) {
    std::string dir_a = base + "/" + name + "_a";
    std::string dir_b = base + "/" + name + "_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    RunOptions ra;
    ra.out_dir = dir_a;
    ra.jobs = opt.jobs;
    RunOptions rb = ra;
    rb.out_dir = dir_b;
    int code_a = run_config_json(cfg, ra);
    int code_b = run_config_json(cfg, rb);
    bool identical = code_a == code_b;
    std::string mismatch;
    if (identical) {
      for (const auto& entry : fs::directory_iterator(dir_a)) {
        std::string fname = entry.path().filename().string();
        if (fname == "manifest.json") continue;  // carries wall times
        std::string other = dir_b + "/" + fname;
        if (!fs::exists(other) || read_file(entry.path().string()) != read_file(other)) {
          identical = false;
          mismatch = fname;
          break;
        }
      }
    }
    m.assert_true("repro." + name + "_byte_identical", identical, mismatch);
  }
  m.assert_le("repro.wall_time_s", timer.elapsed(), 300.0);
  return m.assertions;
}

std::vector<std::string> suite_names() { return {"exact", "solver", "gcmc", "dynamics", "repro", "all"}; }

std::vector<Assertion> run_suite(const std::string& name, const VerifyOptions& opt) {
  std::vector<Assertion> out;
  auto append = [&](std::vector<Assertion> v) {
    for (auto& a : v) out.push_back(std::move(a));
  };
  if (name == "exact") {
    append(criterion_exact_identities(opt));
    append(criterion_gnz(opt));
    append(criterion_bogoliubov(opt));
  } else if (name == "solver") {
    append(criterion_contraction(opt));
  } else if (name == "gcmc") {
    append(criterion_gcmc(opt));
  } else if (name == "dynamics") {
    append(criterion_dynamics_free(opt));
    append(criterion_dynamics_interacting(opt));
    append(criterion_conservation(opt));
  } else if (name == "repro") {
    append(criterion_reproducibility(opt));
  } else if (name == "all") {
    for (const std::string& s : {"exact", "solver", "gcmc", "dynamics", "repro"})
      append(run_suite(s, opt));
  } else {
    fail(Errc::parse, "unknown verify suite '" + name + "'; known: exact, solver, gcmc, dynamics, repro, all");
  }
  return out;
}

}  // namespace bogo
