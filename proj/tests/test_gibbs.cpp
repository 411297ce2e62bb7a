#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bogo/gibbs.hpp"
#include "bogo/rng.hpp"

using namespace bogo;

namespace {

PairPotential random_finite(Philox& rng, int n, double beta, double lo = -0.3, double hi = 1.0) {
  std::vector<std::vector<ExtReal>> phi(n, std::vector<ExtReal>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) phi[i][j] = phi[j][i] = ExtReal{rng.uniform(lo, hi), false};
  return PairPotential::from_matrix(std::move(phi), beta);
}

PairPotential zero_potential(int n) {
  return PairPotential::from_matrix(std::vector<std::vector<ExtReal>>(n, std::vector<ExtReal>(n)), 1.0);
}

// independent transfer-matrix oracle for a nearest-neighbour chain:
// Z = sum over occupation strings of prod sigma^{n_i} prod e^{-beta phi} on
// adjacent occupied pairs
double chain_partition_oracle(int n, double sigma, double beta, double phi_nn) {
  // state = occupation of the previous site
  double w_empty = 1, w_occ = 0;
  for (int i = 0; i < n; ++i) {
    double occ_factor = sigma;
    double new_empty = w_empty + w_occ;
    double new_occ = occ_factor * (w_empty + w_occ * std::exp(-beta * phi_nn));
    w_empty = new_empty;
    w_occ = new_occ;
  }
  return w_empty + w_occ;
}

double chain_prob_oracle(int n, double sigma, double beta, double phi_nn, Mask gamma) {
  double w = 1;
  for (int i = 0; i < n; ++i)
    if (gamma & (Mask(1) << i)) {
      w *= sigma;
      if (i > 0 && (gamma & (Mask(1) << (i - 1)))) w *= std::exp(-beta * phi_nn);
    }
  return w / chain_partition_oracle(n, sigma, beta, phi_nn);
}

}  // namespace

TEST_CASE("energy functional") {
  Philox rng(1);
  PairPotential pot = random_finite(rng, 6, 1.0);

  CHECK(energy(0, pot).value == 0.0);        // E(empty) = 0
  CHECK(energy(0b001000, pot).value == 0.0); // E({x}) = 0
  CHECK(energy(0b000011, pot).value == doctest::Approx(pot.phi(0, 1).value));

  // brute-force double loop on a 5-point configuration
  Mask eta = 0b011111;
  double want = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if ((eta & (Mask(1) << i)) && (eta & (Mask(1) << j))) want += pot.phi(i, j).value;
  CHECK(energy(eta, pot).value == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("interaction energy") {
  Philox rng(2);
  PairPotential pot = random_finite(rng, 6, 1.0);

  CHECK(interaction(0, 0b111, pot).value == 0.0);
  CHECK(interaction(0b11, 0, pot).value == 0.0);

  // overlap falls under the diagonal convention: +infinity, Mayer factor 0
  ExtReal w = interaction(0b001, 0b001, pot);
  CHECK(w.inf);
  CHECK(boltzmann_weight(pot.beta(), w) == 0.0);

  Mask eta = 0b000101, gamma = 0b111000;
  double want = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if ((eta & (Mask(1) << i)) && (gamma & (Mask(1) << j))) want += pot.phi(i, j).value;
  CHECK(interaction(eta, gamma, pot).value == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("mayer product identity including the hard-core zero") {
  Philox rng(3);
  int n = 7;
  std::vector<std::vector<ExtReal>> phi(n, std::vector<ExtReal>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      phi[i][j] = phi[j][i] =
          (i == 1 && j == 4) ? ExtReal::infinite() : ExtReal{rng.uniform(-0.5, 1.0), false};
    }
  PairPotential pot = PairPotential::from_matrix(std::move(phi), 0.8);
  for (Mask gamma = 0; gamma < (Mask(1) << n); ++gamma) {
    for (int x = 0; x < n; ++x) {
      if (gamma & (Mask(1) << x)) continue;
      double lhs = boltzmann_weight(pot.beta(), interaction(Mask(1) << x, gamma, pot));
      double rhs = 1;
      for (int y = 0; y < n; ++y)
        if (gamma & (Mask(1) << y)) rhs *= 1.0 + (pot.mayer(x, y) - 1.0);
      CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("energy factorization over disjoint configurations") {
  // exp(-beta E(eta+xi)) = exp(-beta E(eta)) exp(-beta E(xi)) exp(-beta W(eta,xi))
  Philox rng(4);
  PairPotential pot = random_finite(rng, 8, 1.2);
  Mask all = (Mask(1) << 8) - 1;
  for (int rep = 0; rep < 50; ++rep) {
    Mask eta = rng.next_u32() & all;
    Mask xi = rng.next_u32() & all & ~eta;
    double joint = boltzmann_weight(pot.beta(), energy(eta | xi, pot));
    double split = boltzmann_weight(pot.beta(), energy(eta, pot)) *
                   boltzmann_weight(pot.beta(), energy(xi, pot)) *
                   boltzmann_weight(pot.beta(), interaction(eta, xi, pot));
    CHECK(std::abs(joint - split) < 1e-12 * std::max(1.0, joint));
  }
}

TEST_CASE("mayer norm") {
  SUBCASE("zero potential keeps only the diagonal term") {
    SiteSpace space = SiteSpace::uniform(5, 0.8);
    CHECK(mayer_norm(zero_potential(5), space) == doctest::Approx(0.8));
  }

  SUBCASE("hard core in the continuum equals z times the ball volume") {
    RadialPotential hc = RadialPotential::hardcore(0.5);
    CHECK(mayer_norm_continuum(hc, 1.0, 2.0, 1) == doctest::Approx(2.0 * 2 * 0.5).epsilon(1e-6));
    CHECK(mayer_norm_continuum(hc, 1.0, 1.5, 3) ==
          doctest::Approx(1.5 * 4.0 / 3.0 * 3.14159265358979 * 0.125).epsilon(1e-6));
  }

  SUBCASE("beta to zero keeps only the diagonal") {
    SiteSpace space = SiteSpace::uniform(6, 0.5);
    Philox rng(9);
    std::vector<std::vector<ExtReal>> phi(6, std::vector<ExtReal>(6));
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) phi[i][j] = phi[j][i] = ExtReal{rng.uniform(-0.5, 1.0), false};
    PairPotential pot = PairPotential::from_matrix(std::move(phi), 1e-9);
    CHECK(mayer_norm(pot, space) == doctest::Approx(0.5).epsilon(1e-6));
  }
}

TEST_CASE("gibbs measures") {
  SUBCASE("zero potential gives the free measure") {
    SiteSpace space = SiteSpace::uniform(4, 0.7);
    SetFunction mu = gibbs_measure(space, zero_potential(4));
    double z = std::pow(1.7, 4);
    for (Mask m = 0; m < mu.table_size(); ++m)
      CHECK(mu[m].real() == doctest::Approx(std::pow(0.7, popcount(m)) / z).epsilon(1e-12));
  }

  SUBCASE("hard core between adjacent sites kills the pair") {
    std::vector<std::vector<ExtReal>> phi(2, std::vector<ExtReal>(2));
    phi[0][1] = phi[1][0] = ExtReal::infinite();
    SiteSpace space = SiteSpace::uniform(2, 1.0);
    SetFunction mu = gibbs_measure(space, PairPotential::from_matrix(std::move(phi), 1.0));
    CHECK(mu[0b11].real() == 0.0);
    CHECK(mu[0b01].real() == doctest::Approx(1.0 / 3.0));
  }

  SUBCASE("eight-site chain matches the transfer-matrix oracle") {
    int n = 8;
    double sigma = 0.6, beta = 0.9, phi_nn = 1.3;
    SiteSpace space = SiteSpace::uniform(n, sigma);
    std::vector<std::vector<ExtReal>> phi(n, std::vector<ExtReal>(n));
    for (int i = 0; i + 1 < n; ++i) phi[i][i + 1] = phi[i + 1][i] = ExtReal{phi_nn, false};
    SetFunction mu = gibbs_measure(space, PairPotential::from_matrix(std::move(phi), beta));
    for (Mask g = 0; g < mu.table_size(); ++g)
      CHECK(mu[g].real() == doctest::Approx(chain_prob_oracle(n, sigma, beta, phi_nn, g)).epsilon(1e-11));
  }
}

TEST_CASE("GNZ balance") {
  Philox rng(11);

  SUBCASE("exact Gibbs measures satisfy the balance for random tables") {
    for (int rep = 0; rep < 5; ++rep) {
      int n = 4 + rep;
      SiteSpace space = SiteSpace::uniform(n, rng.uniform(0.4, 1.0));
      PairPotential pot = random_finite(rng, n, rng.uniform(0.2, 1.4));
      SetFunction mu = gibbs_measure(space, pot);
      std::vector<cplx> a(n);
      for (auto& v : a) v = cplx(rng.normal(), rng.normal());
      SetFunction b = SetFunction::full(space, Role::quasi_observable);
      for (Mask m = 0; m < b.table_size(); ++m) b[m] = cplx(rng.normal(), rng.normal());
      CHECK(gnz_residual(mu, space, pot, [&](int x, Mask g) { return a[x] * b[g]; }) < 1e-12);
    }
  }

  SUBCASE("Mecke case: the free measure balances with zero potential") {
    SiteSpace space = SiteSpace::uniform(6, 0.9);
    PairPotential pot = zero_potential(6);
    SetFunction mu = gibbs_measure(space, pot);
    CHECK(gnz_residual(mu, space, pot, [](int, Mask g) { return cplx(popcount(g), 1.0); }) < 1e-12);
  }

  SUBCASE("a one-percent perturbation is detected") {
    SiteSpace space = SiteSpace::uniform(5, 0.8);
    PairPotential pot = random_finite(rng, 5, 1.0);
    SetFunction mu = gibbs_measure(space, pot);
    mu[3] *= 1.01;
    cplx total(0, 0);
    for (Mask m = 0; m < mu.table_size(); ++m) total += mu[m];
    for (Mask m = 0; m < mu.table_size(); ++m) mu[m] /= total;
    CHECK(gnz_residual(mu, space, pot, [](int x, Mask g) { return cplx(1.0 + x, popcount(g)); }) > 1e-6);
  }
}

TEST_CASE("equilibrium equation forms") {
  Philox rng(13);

  SUBCASE("form i vanishes for exact Gibbs tables") {
    for (int rep = 0; rep < 4; ++rep) {
      int n = 4 + rep;
      SiteSpace space = SiteSpace::uniform(n, rng.uniform(0.5, 1.0));
      PairPotential pot = random_finite(rng, n, 1.0);
      SetFunction mu = gibbs_measure(space, pot);
      Field theta = Field::zeros(n);
      for (auto& v : theta.value) v = 0.4 * cplx(rng.normal(), rng.normal());
      CHECK(bogoliubov_equation_residual(mu, space, pot, theta, BogoForm::i) < 1e-10);
    }
  }

  SUBCASE("free measure: shifted field is theta off x and -1 at x") {
    SiteSpace space = SiteSpace::uniform(5, 0.8);
    PairPotential pot = zero_potential(5);
    SetFunction mu = gibbs_measure(space, pot);
    Field theta = Field::zeros(5);
    for (auto& v : theta.value) v = 0.3 * cplx(rng.normal(), rng.normal());
    // direct check of the closed form: delta L / delta theta(x) = L(tilde)
    for (int x = 0; x < 5; ++x) {
      Field shifted = theta;
      shifted.value[x] = cplx(-1, 0);
      cplx lhs = bogoliubov_site_derivative(mu, space, theta, x);
      cplx rhs = bogoliubov_eval(mu, space, shifted);
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
    CHECK(bogoliubov_equation_residual(mu, space, pot, theta, BogoForm::i) < 1e-12);
  }

  SUBCASE("forms ii and iii vanish for Gibbs tables and need f") {
    SiteSpace space = SiteSpace::uniform(6, 0.7);
    PairPotential pot = random_finite(rng, 6, 0.8);
    SetFunction mu = gibbs_measure(space, pot);
    Field theta = Field::zeros(6), f = Field::zeros(6);
    for (auto& v : theta.value) v = 0.35 * cplx(rng.normal(), rng.normal());
    for (auto& v : f.value) v = 0.35 * cplx(rng.normal(), rng.normal());
    CHECK(bogoliubov_equation_residual(mu, space, pot, theta, BogoForm::ii, &f) < 1e-10);
    CHECK(bogoliubov_equation_residual(mu, space, pot, theta, BogoForm::iii, &f) < 1e-10);
    CHECK_THROWS_AS(bogoliubov_equation_residual(mu, space, pot, theta, BogoForm::ii), Error);
  }

  SUBCASE("forms i and ii agree in pass/fail on a non-solution") {
    SiteSpace space = SiteSpace::uniform(5, 0.8);
    PairPotential pot = random_finite(rng, 5, 1.0);
    // a correlation-style table that is not the Gibbs functional
    SetFunction fake = SetFunction::full(space, Role::coefficients);
    fake[0] = 1.0;
    for (Mask m = 1; m < fake.table_size(); ++m) fake[m] = 0.3 / (1.0 + popcount(m));
    Field theta = Field::zeros(5), f = Field::zeros(5);
    for (auto& v : theta.value) v = 0.3 * cplx(rng.normal(), rng.normal());
    for (auto& v : f.value) v = 0.3 * cplx(rng.normal(), rng.normal());
    double r1 = bogoliubov_equation_residual(fake, space, pot, theta, BogoForm::i);
    double r2 = bogoliubov_equation_residual(fake, space, pot, theta, BogoForm::ii, &f);
    CHECK(r1 > 1e-6);
    CHECK(r2 > 1e-6);
  }
}
