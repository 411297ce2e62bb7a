#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "bogo/gcmc.hpp"

using namespace bogo;

namespace {

// Exact detailed-balance / stationarity check on a toy discretization: m
// cells, configurations are cell subsets, birth proposes a uniform cell and
// death a uniform particle, with the chain's acceptance rules.  The
// grand-canonical weights are pi(gamma) ~ (z V / m)^{|gamma|} e^{-beta E}.
struct ToyChain {
  int m;
  double z_vol;  // z * V
  double beta;
  double pair_energy(int a, int b) const { return 0.4 * std::abs(a - b); }

  double energy(Mask g) const {
    double e = 0;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b)
        if ((g & (Mask(1) << a)) && (g & (Mask(1) << b))) e += pair_energy(a, b);
    return e;
  }
  double weight(Mask g) const { return std::pow(z_vol / m, popcount(g)) * std::exp(-beta * energy(g)); }

  // transition probability gamma -> gamma' under one birth-or-death attempt
  double transition(Mask from, Mask to) const {
    int n = popcount(from);
    if (to == from) return self_loop(from);
    if (popcount(to) == n + 1 && (to & from) == from) {
      int cell = std::countr_zero(to ^ from);
      double w = 0;
      for (int b = 0; b < m; ++b)
        if (from & (Mask(1) << b)) w += pair_energy(cell, b);
      double acc = std::min(1.0, z_vol / (n + 1) * std::exp(-beta * w));
      return 0.5 * (1.0 / m) * acc;
    }
    if (popcount(to) == n - 1 && (to & from) == to) {
      int cell = std::countr_zero(to ^ from);
      double w = 0;
      for (int b = 0; b < m; ++b)
        if (to & (Mask(1) << b)) w += pair_energy(cell, b);
      double acc = std::min(1.0, n / z_vol * std::exp(beta * w));
      return 0.5 * (1.0 / n) * acc;
    }
    return 0;
  }

  double self_loop(Mask from) const {
    double leave = 0;
    for (Mask to = 0; to < (Mask(1) << m); ++to)
      if (to != from) leave += transition(from, to);
    return 1.0 - leave;
  }
};

}  // namespace

TEST_CASE("toy chain satisfies detailed balance and stationarity exactly") {
  ToyChain toy{5, 1.7, 0.8};
  Mask states = Mask(1) << toy.m;

  // detailed balance pairwise
  for (Mask a = 0; a < states; ++a)
    for (Mask b = 0; b < states; ++b) {
      if (a == b) continue;
      double flow_ab = toy.weight(a) * toy.transition(a, b);
      double flow_ba = toy.weight(b) * toy.transition(b, a);
      CHECK(std::abs(flow_ab - flow_ba) < 1e-12 * std::max(1.0, flow_ab));
    }

  // stationarity pi P = pi
  double total = 0;
  for (Mask a = 0; a < states; ++a) total += toy.weight(a);
  for (Mask b = 0; b < states; ++b) {
    double acc = 0;
    for (Mask a = 0; a < states; ++a) acc += toy.weight(a) / total * toy.transition(a, b);
    CHECK(std::abs(acc - toy.weight(b) / total) < 1e-12);
  }
}

TEST_CASE("ideal gas chain matches Poisson statistics") {
  ChainConfig cfg;
  cfg.box = {1, 12.0};
  cfg.z = 1.0;
  cfg.beta = 1.0;
  cfg.pot = RadialPotential::gauss(0.0, 0.5, 1.0);
  cfg.n_sweeps = 20000;
  cfg.burn_in = 1000;
  cfg.thinning = 2;
  cfg.seed = 99;
  auto samples = run_gcmc(cfg);
  CorrelationEstimate est = estimate_correlations(samples, cfg.box, 2.0, 6);
  double expect = cfg.z;
  CHECK(std::abs(est.k1 - expect) <= 3 * est.k1_se);
  // birth acceptance from n = 1 at z V = 2 is exactly one
  ChainConfig tiny = cfg;
  tiny.box = {1, 2.0};
  double acc = tiny.z * tiny.box.volume() / (1 + 1);
  CHECK(acc == doctest::Approx(1.0));
}

TEST_CASE("hard-core chain never accepts an overlap") {
  ChainConfig cfg;
  cfg.box = {1, 10.0};
  cfg.z = 0.9;
  cfg.beta = 1.0;
  cfg.pot = RadialPotential::hardcore(0.4);
  cfg.n_sweeps = 8000;
  cfg.burn_in = 500;
  cfg.thinning = 2;
  cfg.seed = 7;
  auto samples = run_gcmc(cfg);
  REQUIRE(samples.size() > 100);
  double min_dist = 1e300;
  for (const auto& s : samples)
    for (int i = 0; i < s.count(); ++i)
      for (int j = i + 1; j < s.count(); ++j)
        min_dist = std::min(min_dist, min_image_dist(s.pts[i], s.pts[j], cfg.box));
  CHECK(min_dist >= 0.4);
}

TEST_CASE("sampled generating functional matches the Poisson form for the free gas") {
  // E[prod(1 + theta(x))] = exp(z int theta) when V == 0
  ChainConfig cfg;
  cfg.box = {1, 10.0};
  cfg.z = 0.8;
  cfg.beta = 1.0;
  cfg.pot = RadialPotential::gauss(0.0, 0.5, 1.0);
  cfg.n_sweeps = 40000;
  cfg.burn_in = 2000;
  cfg.thinning = 4;
  cfg.seed = 21;
  auto samples = run_gcmc(cfg);
  auto theta = [&](const Point& p) {
    double u = (p[0] - 5.0) / 2.0;
    return std::abs(u) < 1 ? 0.5 * std::exp(1.0 - 1.0 / (1 - u * u)) : 0.0;
  };
  std::vector<double> vals;
  for (const auto& s : samples) {
    double prod = 1;
    for (const Point& p : s.pts) prod *= 1.0 + theta(p);
    vals.push_back(prod);
  }
  double mean = 0;
  for (double v : vals) mean += v;
  mean /= vals.size();
  // batch-means error over 20 batches
  int nb = 20;
  std::size_t len = vals.size() / nb;
  double bm = 0, bv = 0;
  std::vector<double> batches;
  for (int b = 0; b < nb; ++b) {
    double acc = 0;
    for (std::size_t i = b * len; i < (b + 1) * len; ++i) acc += vals[i];
    batches.push_back(acc / len);
  }
  for (double v : batches) bm += v;
  bm /= nb;
  for (double v : batches) bv += (v - bm) * (v - bm);
  bv /= (nb - 1);
  double se = std::sqrt(bv / nb);
  double integral = 0;
  int nq = 4000;
  for (int i = 0; i < nq; ++i) integral += theta(Point{10.0 * (i + 0.5) / nq, 0, 0}) * 10.0 / nq;
  double expect = std::exp(cfg.z * integral);
  CHECK(std::abs(mean - expect) <= 3 * se);
}

TEST_CASE("statistical GNZ test on a small interacting chain") {
  ChainConfig cfg;
  cfg.box = {1, 12.0};
  cfg.z = 0.5;
  cfg.beta = 1.0;
  cfg.pot = RadialPotential::bump(0.8, 1.0);
  cfg.n_sweeps = 24000;
  cfg.burn_in = 2000;
  cfg.thinning = 4;
  cfg.seed = 41;
  auto samples = run_gcmc(cfg);
  auto family = default_gnz_family(cfg.box, 1.0);
  REQUIRE(family.size() == 20);
  GnzTestReport rep = gnz_statistical_test(samples, cfg, family);
  CHECK(rep.pass);

  // Mecke sanity on one indicator function: LHS ~ mean count in the region,
  // RHS ~ z |region| for the free gas
  ChainConfig freecfg = cfg;
  freecfg.pot = RadialPotential::gauss(0.0, 0.4, 0.8);
  freecfg.seed = 43;
  auto freesamples = run_gcmc(freecfg);
  GnzTestReport freerep = gnz_statistical_test(freesamples, freecfg, family);
  CHECK(freerep.pass);

  ChainConfig wrong = cfg;
  wrong.z = 1.2 * cfg.z;
  GnzTestReport bad = gnz_statistical_test(samples, wrong, family);
  CHECK(!bad.pass);
}

TEST_CASE("estimator input validation") {
  Box box{1, 8.0};
  std::vector<ParticleState> none;
  CHECK_THROWS_AS(estimate_correlations(none, box, 1.0, 4), Error);
  std::vector<ParticleState> few(10);
  CHECK_THROWS_AS(estimate_correlations(few, box, 1.0, 4), Error);
  std::vector<ParticleState> enough(40);
  CHECK_THROWS_AS(estimate_correlations(enough, box, 5.0, 4), Error);  // r_max above side/2
}

TEST_CASE("seeded chains are reproducible") {
  ChainConfig cfg;
  cfg.box = {1, 9.0};
  cfg.z = 0.7;
  cfg.beta = 1.0;
  cfg.pot = RadialPotential::bump(0.5, 1.0);
  cfg.n_sweeps = 500;
  cfg.burn_in = 100;
  cfg.thinning = 1;
  cfg.seed = 1234;
  auto a = run_gcmc(cfg);
  auto b = run_gcmc(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].count() == b[i].count());
    for (int p = 0; p < a[i].count(); ++p) CHECK(a[i].pts[p][0] == b[i].pts[p][0]);
  }
}
