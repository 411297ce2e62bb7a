#include "bogo/gcmc.hpp"

#include <algorithm>
#include <cmath>

namespace bogo {

namespace {

double shell_measure(int dim, double lo, double hi) {
  constexpr double pi = 3.14159265358979323846;
  if (dim == 1) return 2 * (hi - lo);
  if (dim == 2) return pi * (hi * hi - lo * lo);
  return 4.0 / 3.0 * pi * (hi * hi * hi - lo * lo * lo);
}

struct BatchStats {
  double mean = 0, se = 0;
};

// batch means over a chronologically ordered series; conservative w.r.t.
// autocorrelation once batches are long
BatchStats batch_means(const std::vector<double>& series, int n_batches = 20) {
  BatchStats out;
  std::size_t n = series.size();
  if (n == 0) return out;
  if (static_cast<std::size_t>(n_batches) > n) n_batches = static_cast<int>(n);
  std::size_t len = n / n_batches;
  std::vector<double> bm;
  for (int b = 0; b < n_batches; ++b) {
    double acc = 0;
    for (std::size_t i = b * len; i < (b + 1) * len; ++i) acc += series[i];
    bm.push_back(acc / len);
  }
  double mean = 0;
  for (double v : bm) mean += v;
  mean /= bm.size();
  double var = 0;
  for (double v : bm) var += (v - mean) * (v - mean);
  var /= (bm.size() - 1);
  out.mean = mean;
  out.se = std::sqrt(var / bm.size());
  return out;
}

}  // namespace

void ChainConfig::validate() const {
  box.validate(pot.cutoff());
  if (!(z > 0)) fail(Errc::invalid_argument, "gcmc: activity z must be positive");
  if (!(beta >= 0)) fail(Errc::invalid_argument, "gcmc: beta must be >= 0");
  if (burn_in >= n_sweeps) fail(Errc::invalid_argument, "gcmc: burn_in must be below n_sweeps");
  if (thinning < 1) fail(Errc::invalid_argument, "gcmc: thinning must be >= 1");
}

void gcmc_step(ParticleState& state, const ChainConfig& cfg, Philox& rng) {
  double volume = cfg.box.volume();
  bool birth = rng.uniform() < 0.5;
  if (birth) {
    Point x{0, 0, 0};
    for (int c = 0; c < cfg.box.dim; ++c) x[c] = rng.uniform(0.0, cfg.box.side);
    ExtReal w = point_interaction(x, state, cfg.pot, cfg.box);
    double factor = boltzmann_weight(cfg.beta, w);  // hard-core overlap rejects via exact 0
    double acc = cfg.z * volume / (state.count() + 1) * factor;
    if (rng.uniform() < std::min(1.0, acc)) state.pts.push_back(x);
  } else {
    int n = state.count();
    if (n == 0) return;
    int i = rng.uniform_int(n);
    ExtReal w = point_interaction(state.pts[i], state, cfg.pot, cfg.box, i);
    double acc;
    if (w.inf || cfg.beta * w.value > 700) {
      acc = 1.0;  // removing an arbitrarily unfavourable particle is always accepted
    } else {
      acc = n / (cfg.z * volume) * std::exp(cfg.beta * w.value);
    }
    if (rng.uniform() < std::min(1.0, acc)) state.pts.erase(state.pts.begin() + i);
  }
}

std::vector<ParticleState> run_gcmc(const ChainConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  Philox rng(cfg.seed, stream);
  ParticleState state;
  long moves_per_sweep = std::max<long>(1, std::lround(cfg.z * cfg.box.volume()));
  std::vector<ParticleState> samples;
  for (long sweep = 0; sweep < cfg.n_sweeps; ++sweep) {
    for (long m = 0; m < moves_per_sweep; ++m) gcmc_step(state, cfg, rng);
    if (sweep >= cfg.burn_in && (sweep - cfg.burn_in) % cfg.thinning == 0) samples.push_back(state);
  }
  return samples;
}

CorrelationEstimate estimate_correlations(const std::vector<ParticleState>& samples, const Box& box,
                                          double r_max, int n_bins) {
  if (samples.empty()) fail(Errc::invalid_argument, "estimate_correlations: empty sample list");
  if (samples.size() < 30) fail(Errc::invalid_argument, "estimate_correlations: need at least 30 samples");
  if (!(r_max > 0) || n_bins < 1) fail(Errc::invalid_argument, "estimate_correlations: bad bins");
  if (r_max > box.side / 2) fail(Errc::invalid_argument, "estimate_correlations: r_max above half the box side");
  double volume = box.volume();
  CorrelationEstimate est;
  est.n_samples = static_cast<long>(samples.size());
  double width = r_max / n_bins;
  for (int b = 0; b < n_bins; ++b) {
    est.bin_lo.push_back(b * width);
    est.bin_hi.push_back((b + 1) * width);
  }

  std::vector<double> density;
  std::vector<std::vector<double>> pair_density(n_bins);
  for (const ParticleState& s : samples) {
    density.push_back(s.count() / volume);
    std::vector<long> counts(n_bins, 0);
    for (int i = 0; i < s.count(); ++i)
      for (int j = i + 1; j < s.count(); ++j) {
        double r = min_image_dist(s.pts[i], s.pts[j], box);
        int b = static_cast<int>(r / width);
        if (b >= 0 && b < n_bins) counts[b] += 2;  // ordered pairs
      }
    for (int b = 0; b < n_bins; ++b)
      pair_density[b].push_back(counts[b] / (volume * shell_measure(box.dim, est.bin_lo[b], est.bin_hi[b])));
  }
  BatchStats k1 = batch_means(density);
  est.k1 = k1.mean;
  est.k1_se = k1.se;
  for (int b = 0; b < n_bins; ++b) {
    BatchStats k2 = batch_means(pair_density[b]);
    est.k2.push_back(k2.mean);
    est.k2_se.push_back(k2.se);
    double denom = k1.mean * k1.mean;
    est.g.push_back(denom > 0 ? k2.mean / denom : 0.0);
    est.g_se.push_back(denom > 0 ? k2.se / denom : 0.0);
  }
  return est;
}

GnzTestReport gnz_statistical_test(const std::vector<ParticleState>& samples, const ChainConfig& cfg,
                                   const std::vector<GnzTestFunction>& family, int n_quad) {
  if (samples.size() < 40) fail(Errc::invalid_argument, "gnz_statistical_test: too few samples");
  GnzTestReport rep;
  int per_dim = cfg.box.dim == 1 ? n_quad : (cfg.box.dim == 2 ? 24 : 10);

  for (const GnzTestFunction& fn : family) {
    std::vector<double> diffs;
    diffs.reserve(samples.size());
    // insertion grid over the support cube of h
    double lo = fn.support_lo, hi = fn.support_hi;
    int npts = 1;
    for (int d = 0; d < cfg.box.dim; ++d) npts *= per_dim;
    double cell = 1;
    for (int d = 0; d < cfg.box.dim; ++d) cell *= (hi - lo) / per_dim;
    std::vector<Point> grid(npts, Point{0, 0, 0});
    for (int p = 0; p < npts; ++p) {
      int rem = p;
      for (int d = 0; d < cfg.box.dim; ++d) {
        int idx = rem % per_dim;
        rem /= per_dim;
        grid[p][d] = lo + (idx + 0.5) * (hi - lo) / per_dim;
      }
    }
    std::vector<double> h_at(npts);
    for (int p = 0; p < npts; ++p) h_at[p] = fn.h(grid[p]);

    for (const ParticleState& s : samples) {
      double lhs = 0;
      for (int i = 0; i < s.count(); ++i) {
        double hx = fn.h(s.pts[i]);
        if (hx == 0) continue;
        ParticleState rest;
        rest.pts.reserve(s.count() - 1);
        for (int j = 0; j < s.count(); ++j)
          if (j != i) rest.pts.push_back(s.pts[j]);
        lhs += hx * fn.psi(rest);
      }
      double psi_val = fn.psi(s);
      double rhs = 0;
      if (psi_val != 0) {
        double acc = 0;
        for (int p = 0; p < npts; ++p) {
          if (h_at[p] == 0) continue;
          ExtReal w = point_interaction(grid[p], s, cfg.pot, cfg.box);
          acc += h_at[p] * boltzmann_weight(cfg.beta, w);
        }
        rhs = cfg.z * psi_val * acc * cell;
      }
      diffs.push_back(lhs - rhs);
    }
    BatchStats bs = batch_means(diffs);
    GnzFunctionResult r;
    r.name = fn.name;
    r.lhs = 0;
    r.rhs = 0;
    r.diff_se = bs.se;
    if (bs.se == 0) {
      r.degenerate = true;
      r.standardized = 0;
      r.pass = std::abs(bs.mean) == 0;
    } else {
      r.standardized = bs.mean / bs.se;
      r.pass = std::abs(r.standardized) <= 3.0;
    }
    rep.results.push_back(std::move(r));
  }
  int considered = 0, passed = 0;
  for (const auto& r : rep.results) {
    if (r.degenerate) continue;
    ++considered;
    if (r.pass) ++passed;
  }
  rep.pass_fraction = considered > 0 ? static_cast<double>(passed) / considered : 1.0;
  rep.pass = rep.pass_fraction >= 0.95;
  return rep;
}

std::vector<GnzTestFunction> default_gnz_family(const Box& box, double /*r_max*/) {
  std::vector<GnzTestFunction> family;
  double L = box.side;
  int dim = box.dim;

  auto indicator_h = [dim](double lo, double hi) {
    return [lo, hi, dim](const Point& x) {
      for (int d = 0; d < dim; ++d)
        if (x[d] < lo || x[d] >= hi) return 0.0;
      return 1.0;
    };
  };
  auto bump_h = [dim](double lo, double hi) {
    return [lo, hi, dim](const Point& x) {
      double prod = 1;
      for (int d = 0; d < dim; ++d) {
        double u = (x[d] - lo) / (hi - lo);
        if (u <= 0 || u >= 1) return 0.0;
        prod *= std::exp(4.0 - 1.0 / (u * (1.0 - u)));
      }
      return prod;
    };
  };
  auto count_in = [dim](double lo, double hi) {
    return [lo, hi, dim](const ParticleState& s) {
      int c = 0;
      for (const Point& p : s.pts) {
        bool in = true;
        for (int d = 0; d < dim; ++d)
          if (p[d] < lo || p[d] >= hi) in = false;
        if (in) ++c;
      }
      return static_cast<double>(c);
    };
  };

  struct HSpec {
    const char* tag;
    double lo, hi;
    bool smooth;
  };
  std::vector<HSpec> hs = {{"ind_a", 0.10 * L, 0.45 * L, false},
                           {"ind_b", 0.50 * L, 0.90 * L, false},
                           {"bump_a", 0.05 * L, 0.55 * L, true},
                           {"bump_b", 0.40 * L, 0.95 * L, true}};
  struct PsiSpec {
    const char* tag;
    std::function<double(const ParticleState&)> psi;
  };
  std::vector<PsiSpec> psis;
  psis.push_back({"one", [](const ParticleState&) { return 1.0; }});
  psis.push_back({"count", [](const ParticleState& s) { return static_cast<double>(s.count()); }});
  psis.push_back({"count_half", count_in(0.0, 0.5 * L)});
  psis.push_back({"expn", [](const ParticleState& s) { return std::exp(-s.count() / 5.0); }});
  psis.push_back({"count_mid", count_in(0.25 * L, 0.75 * L)});

  for (const auto& h : hs)
    for (const auto& p : psis) {
      GnzTestFunction fn;
      fn.name = std::string(h.tag) + "*" + p.tag;
      fn.h = h.smooth ? bump_h(h.lo, h.hi) : indicator_h(h.lo, h.hi);
      fn.psi = p.psi;
      fn.support_lo = h.lo;
      fn.support_hi = h.hi;
      family.push_back(std::move(fn));
    }
  return family;
}

}  // namespace bogo
