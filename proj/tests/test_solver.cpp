#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bogo/rng.hpp"
#include "bogo/solver.hpp"

using namespace bogo;

namespace {

constexpr double kE = 2.718281828459045235360287471353;

PairPotential zero_potential(int n, double beta = 1.0) {
  return PairPotential::from_matrix(std::vector<std::vector<ExtReal>>(n, std::vector<ExtReal>(n)), beta);
}

PairPotential random_positive(Philox& rng, int n, double beta) {
  std::vector<std::vector<ExtReal>> phi(n, std::vector<ExtReal>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) phi[i][j] = phi[j][i] = ExtReal{rng.uniform(0.0, 1.0), false};
  return PairPotential::from_matrix(std::move(phi), beta);
}

SetFunction random_coeffs(Philox& rng, const SiteSpace& space) {
  SetFunction t = SetFunction::full(space, Role::coefficients);
  for (Mask m = 0; m < t.table_size(); ++m) t[m] = cplx(rng.normal(), rng.normal());
  return t;
}

// independent oracle for J in coefficient form:
//   k_J(eta) = (1/|eta|) sum_{x in eta} prod_{y in eta\x} m_xy
//              * sum_{xi disjoint from eta\x} k((eta\x)+xi) prod_{y in xi}(m_xy - 1) lam(xi),
// derived by expanding the t-integral of the defining formula exactly.
SetFunction apply_J_oracle(const SetFunction& k, const SiteSpace& space, const PairPotential& pot) {
  int n = space.size();
  auto lam = sigma_products(space, k.window());
  SetFunction out = SetFunction::full(space, Role::coefficients);
  Mask all = space.full_mask();
  for (Mask eta = 1; eta <= all; ++eta) {
    cplx acc(0, 0);
    for (int xj = 0; xj < n; ++xj) {
      Mask xbit = Mask(1) << xj;
      if (!(eta & xbit)) continue;
      Mask base = eta ^ xbit;
      cplx prod_m(1, 0);
      for (int y = 0; y < n; ++y)
        if (base & (Mask(1) << y)) prod_m *= pot.mayer(xj, y);
      cplx inner(0, 0);
      Mask rest = all & ~base;
      for_each_subset(rest, [&](Mask xi) {
        cplx w(1, 0);
        for (int y = 0; y < n; ++y)
          if (xi & (Mask(1) << y)) w *= (pot.mayer(xj, y) - 1.0) * space.sigma[y];
        inner += k[base | xi] * w;
      });
      acc += prod_m * inner;
    }
    out[eta] = acc / static_cast<double>(popcount(eta));
  }
  return out;
}

}  // namespace

TEST_CASE("ent-norm upper bound") {
  SiteSpace space = SiteSpace::uniform(4, 1.0);

  SUBCASE("constant functional is exact") {
    SetFunction one = SetFunction::full(space, Role::coefficients);
    one[0] = 1.0;
    CHECK(ent_norm_upper_bound(one, 0.7) == doctest::Approx(1.0));
  }

  SUBCASE("affine functional closed form") {
    // k(empty) = 1 and all singletons 1: bound = 1 + N/(e alpha)
    SetFunction t = SetFunction::full(space, Role::coefficients);
    t[0] = 1.0;
    for (int j = 0; j < 4; ++j) t[Mask(1) << j] = 1.0;
    double alpha = 1.3;
    CHECK(ent_norm_upper_bound(t, alpha) == doctest::Approx(1.0 + 4.0 / (kE * alpha)).epsilon(1e-13));
  }

  SUBCASE("dominates the sampled sup over rays") {
    Philox rng(5);
    SetFunction t = random_coeffs(rng, space);
    double alpha = 0.9;
    double bound = ent_norm_upper_bound(t, alpha);
    double sampled = 0;
    for (int s = 0; s < 10000; ++s) {
      Field theta = Field::zeros(4);
      double scale = std::exp(rng.uniform(-2, 2));
      for (auto& v : theta.value) v = scale * cplx(rng.normal(), rng.normal());
      double norm = l1_norm(theta, space, space.full_mask());
      sampled = std::max(sampled,
                         std::abs(bogoliubov_eval(t, space, theta)) * std::exp(-alpha * norm));
    }
    CHECK(sampled <= bound * (1 + 1e-12));
  }

  SUBCASE("monotone non-increasing in alpha") {
    Philox rng(6);
    SetFunction t = random_coeffs(rng, space);
    double prev = ent_norm_upper_bound(t, 0.2);
    for (double alpha : {0.4, 0.8, 1.6, 3.2}) {
      double cur = ent_norm_upper_bound(t, alpha);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("J application") {
  Philox rng(7);

  SUBCASE("J of the constant functional is the singleton table") {
    SiteSpace space = SiteSpace::uniform(5, 0.6);
    PairPotential pot = random_positive(rng, 5, 1.0);
    SetFunction one = SetFunction::full(space, Role::coefficients);
    one[0] = 1.0;
    SetFunction j1 = apply_J(one, space, pot);
    CHECK(std::abs(j1[0]) < 1e-14);
    for (Mask m = 1; m < j1.table_size(); ++m) {
      if (popcount(m) == 1)
        CHECK(std::abs(j1[m] - cplx(1, 0)) < 1e-13);
      else
        CHECK(std::abs(j1[m]) < 1e-13);
    }
  }

  SUBCASE("coefficient of the empty set always vanishes") {
    SiteSpace space = SiteSpace::uniform(6, 0.8);
    PairPotential pot = random_positive(rng, 6, 0.7);
    SetFunction t = random_coeffs(rng, space);
    CHECK(std::abs(apply_J(t, space, pot)[0]) < 1e-12);
  }

  SUBCASE("linearity") {
    SiteSpace space = SiteSpace::uniform(5, 0.9);
    PairPotential pot = random_positive(rng, 5, 1.2);
    SetFunction a = random_coeffs(rng, space), b = random_coeffs(rng, space);
    cplx ca(0.7, -0.2), cb(-1.1, 0.4);
    SetFunction combo = SetFunction::full(space, Role::coefficients);
    for (Mask m = 0; m < combo.table_size(); ++m) combo[m] = ca * a[m] + cb * b[m];
    SetFunction lhs = apply_J(combo, space, pot);
    SetFunction ja = apply_J(a, space, pot), jb = apply_J(b, space, pot);
    for (Mask m = 0; m < lhs.table_size(); ++m)
      CHECK(std::abs(lhs[m] - (ca * ja[m] + cb * jb[m])) < 1e-11);
  }

  SUBCASE("matches the closed-form expansion oracle") {
    for (int n : {3, 5, 7}) {
      SiteSpace space = SiteSpace::uniform(n, 0.5);
      for (int i = 0; i < n; ++i) space.sigma[i] = 0.3 + 0.1 * i;
      PairPotential pot = random_positive(rng, n, 0.9);
      SetFunction t = random_coeffs(rng, space);
      SetFunction fast = apply_J(t, space, pot);
      SetFunction want = apply_J_oracle(t, space, pot);
      for (Mask m = 0; m < fast.table_size(); ++m) CHECK(std::abs(fast[m] - want[m]) < 1e-11);
    }
  }

  SUBCASE("evaluation of the image agrees with direct quadrature of the defining integral") {
    SiteSpace space = SiteSpace::uniform(5, 0.5);
    PairPotential pot = random_positive(rng, 5, 1.0);
    SetFunction k = random_coeffs(rng, space);
    SetFunction jk = apply_J(k, space, pot);
    std::vector<double> nodes, weights;
    gauss_legendre_01(16, nodes, weights);
    for (int rep = 0; rep < 5; ++rep) {
      Field theta = Field::zeros(5);
      for (auto& v : theta.value) v = 0.5 * cplx(rng.normal(), rng.normal());
      cplx direct(0, 0);
      for (int x = 0; x < 5; ++x) {
        cplx inner(0, 0);
        for (std::size_t q = 0; q < nodes.size(); ++q) {
          Field shift = Field::zeros(5);
          for (int y = 0; y < 5; ++y) {
            double m = pot.mayer(x, y);
            shift.value[y] = (1.0 + nodes[q] * theta.value[y]) * (m - 1.0) + nodes[q] * theta.value[y];
          }
          shift.value[x] = cplx(-1, 0);
          inner += weights[q] * bogoliubov_eval(k, space, shift);
        }
        direct += theta.value[x] * space.sigma[x] * inner;
      }
      cplx via_table = bogoliubov_eval(jk, space, theta);
      CHECK(std::abs(direct - via_table) < 1e-11 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("fixed point iteration") {
  SUBCASE("free case converges to the closed-form correlation") {
    int n = 6;
    double s = 0.2;  // sigma < 1/e keeps the rate below one
    SiteSpace space = SiteSpace::uniform(n, s);
    PairPotential pot = zero_potential(n);
    auto [L, rep] = fixed_point_solve(space, pot, 1e-12, 500);
    CHECK(rep.converged);
    CHECK(rep.c_beta == doctest::Approx(s));
    for (Mask m = 0; m < L.table_size(); ++m)
      CHECK(std::abs(L[m].real() - std::pow(1.0 + s, -popcount(m))) < 1e-10);
  }

  SUBCASE("matches the enumerated Gibbs correlation on an interacting chain") {
    int n = 8;
    SiteSpace space = SiteSpace::uniform(n, 0.15);
    std::vector<std::vector<ExtReal>> phi(n, std::vector<ExtReal>(n));
    for (int i = 0; i + 1 < n; ++i) phi[i][i + 1] = phi[i + 1][i] = ExtReal{1.0, false};
    PairPotential pot = PairPotential::from_matrix(std::move(phi), 1.0);
    double c = mayer_norm(pot, space);
    CHECK(c < 1.0 / kE);
    auto [L, rep] = fixed_point_solve(space, pot, 1e-10, 2000);
    CHECK(rep.converged);
    SetFunction k = correlation_from_measure(gibbs_measure(space, pot), space);
    for (Mask m = 0; m < L.table_size(); ++m) CHECK(std::abs(L[m] - k[m]) < 1e-8);
    CHECK(rep.observed_ratio_max <= rep.rate_bound + 1e-9);
  }

  SUBCASE("two initializations give the same table") {
    int n = 6;
    SiteSpace space = SiteSpace::uniform(n, 0.12);
    Philox rng(10);
    PairPotential pot = random_positive(rng, n, 0.8);
    auto [L1, rep1] = fixed_point_solve(space, pot, 1e-10, 2000);
    SetFunction init = SetFunction::full(space, Role::coefficients);
    for (Mask m = 0; m < init.table_size(); ++m)
      init[m] = std::pow(1.0 + 0.12, -popcount(m));
    auto [L2, rep2] = fixed_point_solve(space, pot, 1e-10, 2000, &init);
    for (Mask m = 0; m < L1.table_size(); ++m) CHECK(std::abs(L1[m] - L2[m]) < 2e-10);
  }

  SUBCASE("refuses outside the uniqueness regime") {
    int n = 5;
    SiteSpace space = SiteSpace::uniform(n, 0.4);  // C(beta) >= 0.4 > 1/e
    PairPotential pot = zero_potential(n);
    CHECK_THROWS_WITH_AS(fixed_point_solve(space, pot, 1e-10, 50),
                         doctest::Contains("outside uniqueness regime"), Error);
  }

  SUBCASE("refuses potentials with a negative part") {
    int n = 4;
    SiteSpace space = SiteSpace::uniform(n, 0.1);
    std::vector<std::vector<ExtReal>> phi(n, std::vector<ExtReal>(n));
    phi[0][1] = phi[1][0] = ExtReal{-0.2, false};
    PairPotential pot = PairPotential::from_matrix(std::move(phi), 1.0);
    CHECK_THROWS_AS(fixed_point_solve(space, pot, 1e-10, 50), Error);
  }

  SUBCASE("step deltas decay geometrically at the bounded rate") {
    int n = 7;
    SiteSpace space = SiteSpace::uniform(n, 0.18);
    Philox rng(20);
    PairPotential pot = random_positive(rng, n, 1.0);
    auto [L, rep] = fixed_point_solve(space, pot, 1e-12, 3000);
    REQUIRE(rep.deltas.size() >= 20);
    for (std::size_t i = 1; i < rep.deltas.size(); ++i) {
      if (rep.deltas[i - 1] < 1e-14) break;
      CHECK(rep.deltas[i] / rep.deltas[i - 1] <= rep.rate_bound + 1e-9);
    }
  }
}

TEST_CASE("contraction certificate") {
  SUBCASE("rate bound formula") {
    SiteSpace space = SiteSpace::uniform(4, 0.1);
    PairPotential pot = zero_potential(4);
    ContractionReport rep = contraction_certificate(space, pot, 2.0, 10);
    CHECK(rep.c_beta == doctest::Approx(0.1));
    CHECK(rep.rate_bound == doctest::Approx(std::exp(2.0 * 0.1) / 2.0));
  }

  SUBCASE("alpha = 1/C gives rate e C, below one iff C < 1/e") {
    SiteSpace space = SiteSpace::uniform(4, 0.3);
    PairPotential pot = zero_potential(4);
    double c = mayer_norm(pot, space);
    ContractionReport rep = contraction_certificate(space, pot, 1.0 / c, 10);
    CHECK(rep.rate_bound == doctest::Approx(kE * c));
    CHECK(rep.rate_bound < 1.0);
  }

  SUBCASE("empirical operator ratio sits below the bound on random pairs") {
    Philox rng(30);
    SiteSpace space = SiteSpace::uniform(8, 0.15);
    PairPotential pot = random_positive(rng, 8, 1.0);
    double c = mayer_norm(pot, space);
    ContractionReport rep = contraction_certificate(space, pot, 1.0 / c, 100);
    CHECK(rep.empirical_ok);
    CHECK(rep.empirical_ratio_max <= rep.rate_bound * (1 + 1e-12));
  }
}
