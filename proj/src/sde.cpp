#include "bogo/sde.hpp"

#include <algorithm>
#include <cmath>

namespace bogo {

void SdeConfig::validate() const {
  box.validate(pot.cutoff());
  if (!(dt > 0)) fail(Errc::invalid_argument, "sde: dt must be positive");
  if (!(t_end >= 0)) fail(Errc::invalid_argument, "sde: t_end must be >= 0");
  if (!(force_cap > 0)) fail(Errc::invalid_argument, "sde: force_cap must be positive");
  if (n_replicas < 1) fail(Errc::invalid_argument, "sde: need at least one replica");
  if (pot.has_hard_core()) fail(Errc::invalid_argument, "sde: potential must be differentiable off 0");
  if (start == Start::fixed && fixed_start.empty())
    fail(Errc::invalid_argument, "sde: fixed start needs points");
  for (double t : record_times)
    if (t < 0 || t > t_end + 1e-12) fail(Errc::invalid_argument, "sde: record time outside [0, t_end]");
}

const ParticleState& Trajectory::at_time(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= 1e-9) return states[i];
  fail(Errc::invalid_argument, "trajectory was not recorded at the requested time");
}

namespace {

ParticleState sample_start(const SdeConfig& cfg, Philox& rng) {
  ParticleState s;
  switch (cfg.start) {
    case SdeConfig::Start::fixed:
      s.pts = cfg.fixed_start;
      break;
    case SdeConfig::Start::poisson: {
      int n = rng.poisson(cfg.z * cfg.box.volume());
      s.pts.resize(n);
      for (auto& p : s.pts) {
        p = {0, 0, 0};
        for (int d = 0; d < cfg.box.dim; ++d) p[d] = rng.uniform(0, cfg.box.side);
      }
      break;
    }
    case SdeConfig::Start::cosine: {
      // inhomogeneous Poisson via thinning against the max intensity
      double kmax = cfg.z * (1 + std::abs(cfg.cosine_amp));
      int n = rng.poisson(kmax * cfg.box.volume());
      for (int i = 0; i < n; ++i) {
        Point p{0, 0, 0};
        for (int d = 0; d < cfg.box.dim; ++d) p[d] = rng.uniform(0, cfg.box.side);
        double intensity =
            cfg.z * (1 + cfg.cosine_amp * std::cos(2 * 3.14159265358979323846 * p[0] / cfg.box.side));
        if (rng.uniform() * kmax < intensity) s.pts.push_back(p);
      }
      break;
    }
  }
  return s;
}

void em_step(ParticleState& s, const SdeConfig& cfg, Philox& rng, double sqrt_dt) {
  int n = s.count();
  std::vector<Point> drift(n, Point{0, 0, 0});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Point d = min_image_delta(s.pts[i], s.pts[j], cfg.box);
      double r2 = 0;
      for (int c = 0; c < cfg.box.dim; ++c) r2 += d[c] * d[c];
      double r = std::sqrt(r2);
      if (r >= cfg.pot.cutoff()) continue;
      double dv = r > 0 ? cfg.pot.deriv(r) : 0.0;
      double mag = std::abs(dv);
      if (mag > cfg.force_cap) dv *= cfg.force_cap / mag;  // clipped pair force
      if (r > 0) {
        for (int c = 0; c < cfg.box.dim; ++c) {
          double g = dv * d[c] / r;  // grad_i V(x_i - x_j)
          drift[i][c] -= 0.5 * cfg.beta * g;
          drift[j][c] += 0.5 * cfg.beta * g;
        }
      }
    }
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < cfg.box.dim; ++c) {
      double move = drift[i][c] * cfg.dt + cfg.noise_scale * sqrt_dt * rng.normal();
      if (std::abs(move) > cfg.box.side / 2)
        fail(Errc::runtime, "sde: unstable step, displacement above half the box side");
      s.pts[i][c] += move;
    }
    wrap_into_box(s.pts[i], cfg.box);
  }
}

}  // namespace

std::vector<Trajectory> simulate_sde(const SdeConfig& cfg, int jobs) {
  cfg.validate();
  std::vector<double> rec = cfg.record_times;
  if (rec.empty()) rec = {cfg.t_end};
  std::sort(rec.begin(), rec.end());
  long n_steps = std::lround(cfg.t_end / cfg.dt);

  std::vector<Trajectory> out(cfg.n_replicas);
  parallel_for(static_cast<std::size_t>(cfg.n_replicas), jobs, [&](std::size_t rb, std::size_t re) {
    for (std::size_t r = rb; r < re; ++r) {
      Philox rng(cfg.seed, r);
      ParticleState s = sample_start(cfg, rng);
      Trajectory traj;
      double sqrt_dt = std::sqrt(cfg.dt);
      std::size_t next_rec = 0;
      auto record_due = [&](double t) {
        while (next_rec < rec.size() && rec[next_rec] <= t + cfg.dt / 2) {
          traj.times.push_back(rec[next_rec]);
          traj.states.push_back(s);
          ++next_rec;
        }
      };
      record_due(0.0);
      for (long step = 1; step <= n_steps; ++step) {
        em_step(s, cfg, rng, sqrt_dt);
        record_due(step * cfg.dt);
      }
      out[r] = std::move(traj);
    }
  });
  return out;
}

CorrelationEstimate empirical_correlations(const std::vector<Trajectory>& trajs, const Box& box, double t,
                                           double r_max, int n_bins) {
  if (trajs.size() < 100) fail(Errc::invalid_argument, "empirical_correlations: need at least 100 replicas");
  std::vector<ParticleState> snapshots;
  snapshots.reserve(trajs.size());
  for (const Trajectory& tr : trajs) snapshots.push_back(tr.at_time(t));
  return estimate_correlations(snapshots, box, r_max, n_bins);
}

ProfileEstimate density_profile(const std::vector<Trajectory>& trajs, const Box& box, double t, int n_bins) {
  if (trajs.size() < 100) fail(Errc::invalid_argument, "density_profile: need at least 100 replicas");
  ProfileEstimate est;
  double width = box.side / n_bins;
  double cross = 1;  // measure of the transverse directions
  for (int d = 1; d < box.dim; ++d) cross *= box.side;
  for (int b = 0; b < n_bins; ++b) {
    est.bin_lo.push_back(b * width);
    est.bin_hi.push_back((b + 1) * width);
  }
  std::vector<std::vector<double>> counts(n_bins);
  for (const Trajectory& tr : trajs) {
    const ParticleState& s = tr.at_time(t);
    std::vector<int> c(n_bins, 0);
    for (const Point& p : s.pts) {
      int b = static_cast<int>(p[0] / width);
      if (b >= 0 && b < n_bins) ++c[b];
    }
    for (int b = 0; b < n_bins; ++b) counts[b].push_back(c[b] / (width * cross));
  }
  for (int b = 0; b < n_bins; ++b) {
    double mean = 0;
    for (double v : counts[b]) mean += v;
    mean /= counts[b].size();
    double var = 0;
    for (double v : counts[b]) var += (v - mean) * (v - mean);
    var /= (counts[b].size() - 1);
    est.k1.push_back(mean);
    est.k1_se.push_back(std::sqrt(var / counts[b].size()));
  }
  return est;
}

}  // namespace bogo
