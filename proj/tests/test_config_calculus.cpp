#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bogo/config_calculus.hpp"
#include "bogo/gibbs.hpp"
#include "bogo/rng.hpp"

using namespace bogo;

namespace {

SetFunction random_table(Philox& rng, const SiteSpace& space, Role role) {
  SetFunction t = SetFunction::full(space, role);
  for (Mask m = 0; m < t.table_size(); ++m) t[m] = cplx(rng.normal(), rng.normal());
  return t;
}

SetFunction free_measure(const SiteSpace& space) {
  int n = space.size();
  PairPotential zero =
      PairPotential::from_matrix(std::vector<std::vector<ExtReal>>(n, std::vector<ExtReal>(n)), 1.0);
  return gibbs_measure(space, zero);
}

// brute-force oracle: direct nested sum over subsets
cplx brute_k_transform(const SetFunction& G, Mask gamma) {
  cplx acc(0, 0);
  for (Mask eta = 0; eta < G.table_size(); ++eta)
    if ((eta & gamma) == eta) acc += G[eta];
  return acc;
}

}  // namespace

TEST_CASE("k-transform of an indicator") {
  SiteSpace space = SiteSpace::uniform(2, 1.0);
  SetFunction G = SetFunction::full(space, Role::quasi_observable);
  G[0b01] = 1.0;  // indicator of {a}
  CHECK(k_transform(G, 0b00) == cplx(0, 0));
  CHECK(k_transform(G, 0b01) == cplx(1, 0));
  CHECK(k_transform(G, 0b10) == cplx(0, 0));
  CHECK(k_transform(G, 0b11) == cplx(1, 0));
}

TEST_CASE("k-transform of a coherent state gives the product form") {
  // G = e(f) with f == 1 on two sites: KG({a,b}) = (1+1)(1+1) = 4
  SiteSpace space = SiteSpace::uniform(2, 1.0);
  Field f = Field::constant(2, 1.0);
  SetFunction G = SetFunction::full(space, Role::quasi_observable);
  for (Mask m = 0; m < G.table_size(); ++m) G[m] = coherent_state(f, m);
  CHECK(k_transform(G, 0b11).real() == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("k-transform matches the double-loop oracle on random tables") {
  Philox rng(42);
  SiteSpace space = SiteSpace::uniform(10, 0.7);
  SetFunction G = random_table(rng, space, Role::quasi_observable);
  for (Mask gamma : {Mask(0), Mask(0b1010101010), Mask(0b1111111111), Mask(0b0000110011)}) {
    cplx got = k_transform(G, gamma);
    cplx want = brute_k_transform(G, gamma);
    CHECK(std::abs(got - want) < 1e-12);
  }
}

TEST_CASE("moebius inversion") {
  SiteSpace space = SiteSpace::uniform(4, 1.0);

  SUBCASE("constant observable inverts to the indicator of the empty set") {
    SetFunction F = SetFunction::full(space, Role::observable);
    for (Mask m = 0; m < F.table_size(); ++m) F[m] = 1.0;
    SetFunction G = k_inverse(F);
    CHECK(std::abs(G[0] - cplx(1, 0)) < 1e-15);
    for (Mask m = 1; m < G.table_size(); ++m) CHECK(std::abs(G[m]) < 1e-15);
  }

  SUBCASE("product observable inverts to the coherent state") {
    Field f = Field::zeros(4);
    for (int i = 0; i < 4; ++i) f.value[i] = cplx(0.3 * (i + 1), -0.1 * i);
    SetFunction F = SetFunction::full(space, Role::observable);
    for (Mask m = 0; m < F.table_size(); ++m) {
      cplx prod(1, 0);
      for (int j = 0; j < 4; ++j)
        if (m & (Mask(1) << j)) prod *= 1.0 + f.value[j];
      F[m] = prod;
    }
    SetFunction G = k_inverse(F);
    for (Mask m = 0; m < G.table_size(); ++m) CHECK(std::abs(G[m] - coherent_state(f, m)) < 1e-13);
  }

  SUBCASE("roundtrip is exact on random tables up to 12 sites") {
    Philox rng(7);
    SiteSpace big = SiteSpace::uniform(12, 0.9);
    SetFunction G = random_table(rng, big, Role::quasi_observable);
    SetFunction back = k_inverse(k_transform_table(G));
    for (Mask m = 0; m < G.table_size(); ++m) CHECK(std::abs(back[m] - G[m]) < 1e-12);
  }
}

TEST_CASE("coherent states") {
  Field f = Field::zeros(3);
  f.value = {cplx(2, 0), cplx(3, 0), cplx(0, 0)};
  CHECK(coherent_state(f, 0) == cplx(1, 0));           // empty product
  CHECK(coherent_state(f, 0b011) == cplx(6, 0));       // 2 * 3
  CHECK(coherent_state(f, 0b100) == cplx(0, 0));       // f == 0 there
}

TEST_CASE("lebesgue-poisson sums") {
  SiteSpace space = SiteSpace::uniform(3, 1.0);

  SUBCASE("indicator of the empty set integrates to one") {
    SetFunction G = SetFunction::full(space, Role::quasi_observable);
    G[0] = 1.0;
    CHECK(lebesgue_poisson_integral(G, space, space.full_mask()).real() == doctest::Approx(1.0));
  }

  SUBCASE("coherent state integrates to the product form") {
    // f == 1, sigma == 1, three sites: sum over subsets = 2^3 = 8
    Field f = Field::constant(3, 1.0);
    SetFunction G = SetFunction::full(space, Role::quasi_observable);
    for (Mask m = 0; m < G.table_size(); ++m) G[m] = coherent_state(f, m);
    CHECK(lebesgue_poisson_integral(G, space, space.full_mask()).real() == doctest::Approx(8.0));
  }

  SUBCASE("random table matches the brute-force oracle") {
    Philox rng(3);
    SiteSpace sp = SiteSpace::uniform(8, 0.6);
    SetFunction G = random_table(rng, sp, Role::quasi_observable);
    auto lam = sigma_products(sp, G.window());
    cplx want(0, 0);
    for (Mask m = 0; m < G.table_size(); ++m) want += G[m] * lam[m];
    CHECK(std::abs(lebesgue_poisson_integral(G, sp, sp.full_mask()) - want) < 1e-12);
  }
}

TEST_CASE("correlation tables from measures") {
  SUBCASE("free measure with unit weights has k = 2^{-|eta|}") {
    SiteSpace space = SiteSpace::uniform(4, 1.0);
    SetFunction k = correlation_from_measure(free_measure(space), space);
    for (Mask m = 0; m < k.table_size(); ++m)
      CHECK(std::abs(k[m].real() - std::pow(2.0, -popcount(m))) < 1e-13);
  }

  SUBCASE("point mass at the empty set gives the indicator correlation") {
    SiteSpace space = SiteSpace::uniform(3, 0.8);
    SetFunction mu = SetFunction::full(space, Role::measure);
    mu[0] = 1.0;
    SetFunction k = correlation_from_measure(mu, space);
    CHECK(k[0].real() == doctest::Approx(1.0));
    for (Mask m = 1; m < k.table_size(); ++m) CHECK(std::abs(k[m]) < 1e-15);
  }

  SUBCASE("duality holds for random tables") {
    Philox rng(11);
    SiteSpace space = SiteSpace::uniform(7, 0.9);
    Philox prng(13);
    PairPotential pot = PairPotential::from_matrix(
        [&] {
          std::vector<std::vector<ExtReal>> phi(7, std::vector<ExtReal>(7));
          for (int i = 0; i < 7; ++i)
            for (int j = i + 1; j < 7; ++j) phi[i][j] = phi[j][i] = ExtReal{prng.uniform(-0.3, 1.0), false};
          return phi;
        }(),
        0.8);
    SetFunction mu = gibbs_measure(space, pot);
    SetFunction k = correlation_from_measure(mu, space);
    SetFunction G = random_table(rng, space, Role::quasi_observable);
    SetFunction KG = k_transform_table(G);
    auto lam = sigma_products(space, G.window());
    cplx lhs(0, 0), rhs(0, 0);
    for (Mask m = 0; m < G.table_size(); ++m) {
      lhs += G[m] * k[m] * lam[m];
      rhs += KG[m] * mu[m];
    }
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("measure reconstruction from correlations") {
  SUBCASE("free two-site closed form") {
    SiteSpace space = SiteSpace::uniform(2, 1.0);
    SetFunction mu = free_measure(space);
    SetFunction k = correlation_from_measure(mu, space);
    CHECK(k[0b01].real() == doctest::Approx(0.5));
    CHECK(k[0b11].real() == doctest::Approx(0.25));
    SetFunction back = measure_from_correlation(k, space);
    CHECK(back[0b01].real() == doctest::Approx(0.25));  // 1/2 - 1/4 = 1/Z = 1/4
  }

  SUBCASE("indicator correlation gives the point mass at empty") {
    SiteSpace space = SiteSpace::uniform(3, 1.3);
    SetFunction k = SetFunction::full(space, Role::correlation);
    k[0] = 1.0;
    SetFunction mu = measure_from_correlation(k, space);
    CHECK(mu[0].real() == doctest::Approx(1.0));
    for (Mask m = 1; m < mu.table_size(); ++m) CHECK(std::abs(mu[m]) < 1e-15);
  }

  SUBCASE("roundtrip on random Gibbs measures, 10 sites") {
    Philox rng(5);
    SiteSpace space = SiteSpace::uniform(10, 0.5);
    std::vector<std::vector<ExtReal>> phi(10, std::vector<ExtReal>(10));
    for (int i = 0; i < 10; ++i)
      for (int j = i + 1; j < 10; ++j) phi[i][j] = phi[j][i] = ExtReal{rng.uniform(-0.4, 1.2), false};
    SetFunction mu = gibbs_measure(space, PairPotential::from_matrix(std::move(phi), 1.0));
    SetFunction back = measure_from_correlation(correlation_from_measure(mu, space), space);
    for (Mask m = 0; m < mu.table_size(); ++m) CHECK(std::abs(back[m] - mu[m]) < 1e-13);
  }
}

TEST_CASE("generating functional evaluation") {
  SUBCASE("normalization L(0) = 1") {
    SiteSpace space = SiteSpace::uniform(5, 0.7);
    SetFunction mu = free_measure(space);
    CHECK(std::abs(bogoliubov_eval(mu, space, Field::zeros(5)) - cplx(1, 0)) < 1e-14);
  }

  SUBCASE("free measure closed form, theta == 1 on two sites") {
    SiteSpace space = SiteSpace::uniform(2, 1.0);
    SetFunction mu = free_measure(space);
    CHECK(bogoliubov_eval(mu, space, Field::constant(2, 1.0)).real() == doctest::Approx(2.25));
  }

  SUBCASE("measure route agrees with the coefficient route") {
    Philox rng(17);
    SiteSpace space = SiteSpace::uniform(8, 0.8);
    std::vector<std::vector<ExtReal>> phi(8, std::vector<ExtReal>(8));
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j) phi[i][j] = phi[j][i] = ExtReal{rng.uniform(-0.3, 1.0), false};
    SetFunction mu = gibbs_measure(space, PairPotential::from_matrix(std::move(phi), 0.9));
    SetFunction k = correlation_from_measure(mu, space);
    for (int rep = 0; rep < 20; ++rep) {
      Field theta = Field::zeros(8);
      for (auto& v : theta.value) v = cplx(rng.normal(), rng.normal());
      cplx a = bogoliubov_eval(mu, space, theta);
      cplx b = bogoliubov_eval(k, space, theta);
      CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(a)));
    }
  }

  SUBCASE("non-finite theta is rejected") {
    SiteSpace space = SiteSpace::uniform(2, 1.0);
    SetFunction mu = free_measure(space);
    Field bad = Field::zeros(2);
    bad.value[1] = cplx(std::nan(""), 0);
    CHECK_THROWS_AS(bogoliubov_eval(mu, space, bad), Error);
  }
}

TEST_CASE("variational derivative tables") {
  Philox rng(23);
  SiteSpace space = SiteSpace::uniform(7, 0.8);
  std::vector<std::vector<ExtReal>> phi(7, std::vector<ExtReal>(7));
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j) phi[i][j] = phi[j][i] = ExtReal{rng.uniform(0.0, 1.0), false};
  SetFunction mu = gibbs_measure(space, PairPotential::from_matrix(std::move(phi), 1.0));
  SetFunction k = correlation_from_measure(mu, space);

  SUBCASE("derivatives at zero recover the correlation function") {
    SetFunction d = variational_derivatives(mu, space, Field::zeros(7));
    for (Mask m = 0; m < d.table_size(); ++m) CHECK(std::abs(d[m] - k[m]) < 1e-12);
  }

  SUBCASE("derivatives at -1 recover the measure density") {
    SetFunction d = variational_derivatives(mu, space, Field::constant(7, cplx(-1, 0)));
    auto lam = sigma_products(space, mu.window());
    for (Mask m = 0; m < d.table_size(); ++m) CHECK(std::abs(d[m] * lam[m] - mu[m]) < 1e-12);
  }

  SUBCASE("site derivative matches a finite-difference-free extraction") {
    Field theta = Field::zeros(7);
    for (auto& v : theta.value) v = 0.4 * cplx(rng.normal(), rng.normal());
    SetFunction d = variational_derivatives(mu, space, theta);
    for (int x = 0; x < 7; ++x) {
      cplx got = bogoliubov_site_derivative(mu, space, theta, x);
      CHECK(std::abs(got - d[Mask(1) << x]) < 1e-12 * std::max(1.0, std::abs(got)));
    }
  }
}

TEST_CASE("star identity") {
  SiteSpace space = SiteSpace::uniform(6, 0.9);

  SUBCASE("constant tables have the closed-form value prod(1 + 2 sigma)") {
    SetFunction G = SetFunction::full(space, Role::quasi_observable);
    for (Mask m = 0; m < G.table_size(); ++m) G[m] = 1.0;
    double lhs_abs = 0;
    double resid = star_identity_residual_scaled(
        G, [](Mask, Mask) { return cplx(1, 0); }, space, &lhs_abs);
    double expect = std::pow(1.0 + 2 * 0.9, 6);
    CHECK(lhs_abs == doctest::Approx(expect).epsilon(1e-12));
    CHECK(resid < 1e-12 * expect);
  }

  SUBCASE("H concentrated on xi = empty degenerates to equal sums") {
    Philox rng(31);
    SetFunction G = random_table(rng, space, Role::quasi_observable);
    SetFunction W = random_table(rng, space, Role::quasi_observable);
    auto H = [&](Mask xi, Mask eta) { return xi == 0 ? W[eta] : cplx(0, 0); };
    CHECK(star_identity_residual(G, H, space) < 1e-12);
  }

  SUBCASE("random positive tables") {
    Philox rng(37);
    SiteSpace sp = SiteSpace::uniform(10, 0.4);
    SetFunction G = SetFunction::full(sp, Role::quasi_observable);
    SetFunction A = SetFunction::full(sp, Role::quasi_observable);
    SetFunction B = SetFunction::full(sp, Role::quasi_observable);
    for (Mask m = 0; m < G.table_size(); ++m) {
      G[m] = rng.uniform();
      A[m] = rng.uniform();
      B[m] = rng.uniform();
    }
    double lhs_abs = 0;
    double resid =
        star_identity_residual_scaled(G, [&](Mask xi, Mask eta) { return A[xi] * B[eta]; }, sp, &lhs_abs);
    CHECK(resid < 1e-12 * std::max(1.0, lhs_abs));
  }
}

TEST_CASE("occupation probabilities") {
  SUBCASE("single free site: P(empty) = 1/2") {
    SiteSpace space = SiteSpace::uniform(1, 1.0);
    OccupationResult r = occupation_probability(free_measure(space), space, {Mask(1)}, {0});
    CHECK(r.direct == doctest::Approx(0.5));
    CHECK(r.via_derivative == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("point mass at empty with zero counts") {
    SiteSpace space = SiteSpace::uniform(3, 1.0);
    SetFunction mu = SetFunction::full(space, Role::measure);
    mu[0] = 1.0;
    OccupationResult r = occupation_probability(mu, space, {Mask(0b011), Mask(0b100)}, {0, 0});
    CHECK(r.direct == doctest::Approx(1.0));
    CHECK(r.via_derivative == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("counts above the block size give zero") {
    SiteSpace space = SiteSpace::uniform(3, 1.0);
    OccupationResult r = occupation_probability(free_measure(space), space, {Mask(0b001)}, {2});
    CHECK(r.direct == 0.0);
    CHECK(std::abs(r.via_derivative) < 1e-15);
  }

  SUBCASE("dual routes agree on a random Gibbs measure, 8 sites, 2 blocks") {
    Philox rng(41);
    SiteSpace space = SiteSpace::uniform(8, 0.7);
    std::vector<std::vector<ExtReal>> phi(8, std::vector<ExtReal>(8));
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j) phi[i][j] = phi[j][i] = ExtReal{rng.uniform(-0.2, 0.9), false};
    SetFunction mu = gibbs_measure(space, PairPotential::from_matrix(std::move(phi), 1.1));
    for (int k0 = 0; k0 <= 3; ++k0)
      for (int k1 = 0; k1 <= 2; ++k1) {
        OccupationResult r = occupation_probability(mu, space, {Mask(0b00000111), Mask(0b00011000)}, {k0, k1});
        CHECK(std::abs(r.direct - r.via_derivative) < 1e-12);
      }
  }
}

TEST_CASE("generalized growth bound check") {
  SUBCASE("free correlation passes with a = 1, eps = 1") {
    SiteSpace space = SiteSpace::uniform(5, 1.0);
    SetFunction k = correlation_from_measure(free_measure(space), space);
    RuelleReport rep = ruelle_bound_check(k, space, 1.0, 1.0);
    CHECK(rep.pass);
    CHECK(rep.max_growth_ratio <= 1.0 + 1e-12);
  }

  SUBCASE("a constructed violation is caught with its witness") {
    SiteSpace space = SiteSpace::uniform(3, 1.0);
    SetFunction k = SetFunction::full(space, Role::correlation);
    k[0] = 1.0;
    k[0b010] = 1.7;  // above a = 0.7
    RuelleReport rep = ruelle_bound_check(k, space, 0.7, 1.0);
    CHECK(!rep.pass);
    CHECK(rep.witness == 0b010);
  }

  SUBCASE("enumerated minimal a for the exact Gibbs table decreases in beta") {
    SiteSpace space = SiteSpace::uniform(6, 0.8);
    auto minimal_a = [&](double beta) {
      std::vector<std::vector<ExtReal>> phi(6, std::vector<ExtReal>(6));
      for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) phi[i][j] = phi[j][i] = ExtReal{0.8, false};
      SetFunction k =
          correlation_from_measure(gibbs_measure(space, PairPotential::from_matrix(std::move(phi), beta)), space);
      double a = 0;
      for (Mask m = 1; m < k.table_size(); ++m)
        a = std::max(a, std::pow(std::abs(k[m]), 1.0 / popcount(m)));
      RuelleReport rep = ruelle_bound_check(k, space, a + 1e-12, 1.0);
      CHECK(rep.pass);
      return a;
    };
    double a0 = minimal_a(0.2), a1 = minimal_a(0.6), a2 = minimal_a(1.4);
    CHECK(a1 <= a0 + 1e-12);
    CHECK(a2 <= a1 + 1e-12);
  }
}

TEST_CASE("derivative norm bound with the computable corner estimate") {
  Philox rng(47);
  SiteSpace space = SiteSpace::uniform(6, 0.9);
  std::vector<std::vector<ExtReal>> phi(6, std::vector<ExtReal>(6));
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) phi[i][j] = phi[j][i] = ExtReal{rng.uniform(0.0, 1.0), false};
  SetFunction mu = gibbs_measure(space, PairPotential::from_matrix(std::move(phi), 1.0));
  for (double r : {0.5, 1.0, 2.0}) {
    Field theta0 = Field::zeros(6);
    for (auto& v : theta0.value) v = 0.3 * cplx(rng.normal(), rng.normal());
    DerivativeBoundReport rep = derivative_bound_check(mu, space, theta0, r);
    CHECK(rep.pass);
  }
}

TEST_CASE("set function JSON round trip") {
  SiteSpace space = SiteSpace::uniform(4, 0.6);
  Philox rng(53);
  SetFunction t = random_table(rng, space, Role::coefficients);
  std::string text = t.to_json(space);
  SetFunction back = SetFunction::from_json(space, text, Role::coefficients);
  for (Mask m = 0; m < t.table_size(); ++m) CHECK(std::abs(t[m] - back[m]) < 1e-15);
  CHECK_THROWS_AS(SetFunction::from_json(space, "{not json", Role::coefficients), Error);
}
