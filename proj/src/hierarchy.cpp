#include "bogo/hierarchy.hpp"

#include <algorithm>
#include <cmath>

namespace bogo {

double Grid1::sep(int i, int j) const {
  double d = x(i) - x(j);
  d -= length * std::round(d / length);
  return d;
}

namespace {

// derivative of the even extension of V along the coordinate
inline double v_prime(const RadialPotential& pot, double s) {
  if (s == 0) return 0;
  double d = pot.deriv(std::abs(s));
  return s > 0 ? d : -d;
}
inline double v_second(const RadialPotential& pot, double s) { return pot.second(std::abs(s)); }

}  // namespace

HierarchyState HierarchyState::full(Grid1 grid, std::vector<double> k1, std::vector<double> k2,
                                    Closure closure) {
  HierarchyState s;
  s.grid = grid;
  s.closure = closure;
  s.invariant = false;
  s.k1 = std::move(k1);
  s.k2 = std::move(k2);
  s.validate();
  return s;
}

HierarchyState HierarchyState::invariant(Grid1 grid, double k1, std::vector<double> k2_sep, Closure closure) {
  HierarchyState s;
  s.grid = grid;
  s.closure = closure;
  s.invariant = true;
  s.k1_value = k1;
  s.k2_sep = std::move(k2_sep);
  s.validate();
  return s;
}

HierarchyState HierarchyState::poisson(Grid1 grid, double z, Closure closure, bool invariant_mode) {
  if (invariant_mode) return invariant(grid, z, std::vector<double>(grid.n, z * z), closure);
  return full(grid, std::vector<double>(grid.n, z),
              std::vector<double>(std::size_t(grid.n) * grid.n, z * z), closure);
}

HierarchyState HierarchyState::expanded() const {
  if (!invariant) return *this;
  HierarchyState s;
  s.grid = grid;
  s.t = t;
  s.closure = closure;
  s.invariant = false;
  s.k0 = k0;
  s.k1.assign(grid.n, k1_value);
  s.k2.resize(std::size_t(grid.n) * grid.n);
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j) s.k2[std::size_t(i) * grid.n + j] = k2_sep[grid.wrap(j - i)];
  return s;
}

double HierarchyState::k2_at(int i, int j) const {
  if (invariant) return k2_sep[grid.wrap(j - i)];
  return k2[std::size_t(i) * grid.n + j];
}

double HierarchyState::max_abs() const {
  double m = 0;
  if (invariant) {
    m = std::abs(k1_value);
    for (double v : k2_sep) m = std::max(m, std::abs(v));
  } else {
    for (double v : k1) m = std::max(m, std::abs(v));
    for (double v : k2) m = std::max(m, std::abs(v));
  }
  return m;
}

void HierarchyState::validate() const {
  if (grid.n < 4 || !(grid.length > 0)) fail(Errc::invalid_argument, "hierarchy: bad grid");
  if (invariant) {
    if (static_cast<int>(k2_sep.size()) != grid.n)
      fail(Errc::invalid_argument, "hierarchy: k2_sep must have one entry per separation");
    for (int s = 0; s < grid.n; ++s)
      if (std::abs(k2_sep[s] - k2_sep[grid.wrap(-s)]) > 1e-12 * (1 + std::abs(k2_sep[s])))
        fail(Errc::invalid_argument, "hierarchy: k2_sep must be even");
  } else {
    if (static_cast<int>(k1.size()) != grid.n)
      fail(Errc::invalid_argument, "hierarchy: k1 must have one entry per grid point");
    if (k2.size() != std::size_t(grid.n) * grid.n)
      fail(Errc::invalid_argument, "hierarchy: k2 must be a full pair grid");
    for (int i = 0; i < grid.n; ++i)
      for (int j = i + 1; j < grid.n; ++j)
        if (std::abs(k2[std::size_t(i) * grid.n + j] - k2[std::size_t(j) * grid.n + i]) >
            1e-12 * (1 + std::abs(k2[std::size_t(i) * grid.n + j])))
          fail(Errc::invalid_argument, "hierarchy: k2 must be symmetric");
  }
  if (std::abs(k0 - 1.0) > 1e-15) fail(Errc::invalid_argument, "hierarchy: k0 must stay 1");
}

HierarchyRhs hierarchy_rhs(const HierarchyState& state, const RadialPotential& pot, double beta) {
  if (state.closure == Closure::none) fail(Errc::invalid_argument, "hierarchy_rhs: closure rule unset");
  const Grid1& g = state.grid;
  int n = g.n;
  double h = g.h();
  int reach = static_cast<int>(std::ceil(pot.cutoff() / h)) + 1;
  if (reach > n / 2) fail(Errc::invalid_argument, "hierarchy_rhs: grid too coarse for the cutoff ball");

  // closure for k3 evaluated on grid indices
  auto k3 = [&](int a, int b, int c) -> double {
    if (state.closure == Closure::zero) return 0.0;
    return (state.k2_at(a, b) * state.k1_at(c) + state.k2_at(a, c) * state.k1_at(b) +
            state.k2_at(b, c) * state.k1_at(a)) /
           3.0;
  };

  HierarchyRhs rhs;
  auto dk1_at = [&](int i) {
    double lap = (state.k1_at(g.wrap(i + 1)) - 2 * state.k1_at(i) + state.k1_at(g.wrap(i - 1))) / (h * h);
    double acc = 0.5 * lap;
    double inter = 0;
    for (int o = -reach; o <= reach; ++o) {
      int y = g.wrap(i + o);
      double s = -o * h;  // x_i - y
      if (std::abs(s) >= pot.cutoff()) continue;
      double dxk2 = (state.k2_at(g.wrap(i + 1), y) - state.k2_at(g.wrap(i - 1), y)) / (2 * h);
      inter += v_prime(pot, s) * dxk2 + v_second(pot, s) * state.k2_at(i, y);
    }
    acc += 0.5 * beta * inter * h;
    return acc;
  };

  auto dk2_at = [&](int i, int j) {
    double lap_x =
        (state.k2_at(g.wrap(i + 1), j) - 2 * state.k2_at(i, j) + state.k2_at(g.wrap(i - 1), j)) / (h * h);
    double lap_y =
        (state.k2_at(i, g.wrap(j + 1)) - 2 * state.k2_at(i, j) + state.k2_at(i, g.wrap(j - 1))) / (h * h);
    double acc = 0.5 * (lap_x + lap_y);
    double s_ij = g.sep(i, j);
    if (std::abs(s_ij) < pot.cutoff()) {
      acc += 0.5 * beta * (v_second(pot, s_ij) + v_second(pot, -s_ij)) * state.k2_at(i, j);
      double dx = (state.k2_at(g.wrap(i + 1), j) - state.k2_at(g.wrap(i - 1), j)) / (2 * h);
      double dy = (state.k2_at(i, g.wrap(j + 1)) - state.k2_at(i, g.wrap(j - 1))) / (2 * h);
      acc += 0.5 * beta * (v_prime(pot, s_ij) * dx + v_prime(pot, -s_ij) * dy);
    }
    if (state.closure == Closure::product) {
      double inter = 0;
      for (int o = -reach; o <= reach; ++o) {
        // k = 1 term: integrate over y near x_i
        int yi = g.wrap(i + o);
        double si = -o * h;
        if (std::abs(si) < pot.cutoff()) {
          double dxk3 = (k3(g.wrap(i + 1), j, yi) - k3(g.wrap(i - 1), j, yi)) / (2 * h);
          inter += v_prime(pot, si) * dxk3 + v_second(pot, si) * k3(i, j, yi);
        }
        // k = 2 term: integrate over y near x_j
        int yj = g.wrap(j + o);
        double sj = -o * h;
        if (std::abs(sj) < pot.cutoff()) {
          double dyk3 = (k3(i, g.wrap(j + 1), yj) - k3(i, g.wrap(j - 1), yj)) / (2 * h);
          inter += v_prime(pot, sj) * dyk3 + v_second(pot, sj) * k3(i, j, yj);
        }
      }
      acc += 0.5 * beta * inter * h;
    }
    return acc;
  };

  if (state.invariant) {
    rhs.dk1_value = dk1_at(0);
    rhs.dk2_sep.resize(n);
    for (int s = 0; s <= n / 2; ++s) {
      double v = dk2_at(0, s);
      rhs.dk2_sep[s] = v;
      rhs.dk2_sep[g.wrap(-s)] = v;  // evenness is exact by construction
    }
  } else {
    rhs.dk1.resize(n);
    for (int i = 0; i < n; ++i) rhs.dk1[i] = dk1_at(i);
    rhs.dk2.assign(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double v = dk2_at(i, j);
        rhs.dk2[std::size_t(i) * n + j] = v;
        rhs.dk2[std::size_t(j) * n + i] = v;
      }
  }
  return rhs;
}

namespace {

void axpy_state(HierarchyState& y, double a, const HierarchyRhs& r) {
  if (y.invariant) {
    y.k1_value += a * r.dk1_value;
    for (std::size_t i = 0; i < y.k2_sep.size(); ++i) y.k2_sep[i] += a * r.dk2_sep[i];
  } else {
    for (std::size_t i = 0; i < y.k1.size(); ++i) y.k1[i] += a * r.dk1[i];
    for (std::size_t i = 0; i < y.k2.size(); ++i) y.k2[i] += a * r.dk2[i];
  }
}

RuelleDiagnostic ruelle_diagnostic(const HierarchyState& s, const RadialPotential& pot, double beta) {
  const Grid1& g = s.grid;
  double h = g.h();
  RuelleDiagnostic d;
  for (int i = 0; i < g.n; ++i) {
    double v = s.k1_at(i);
    double dv = (s.k1_at(g.wrap(i + 1)) - s.k1_at(g.wrap(i - 1))) / (2 * h);
    double lv = (s.k1_at(g.wrap(i + 1)) - 2 * v + s.k1_at(g.wrap(i - 1))) / (h * h);
    d.m1 = std::max(d.m1, std::abs(v) + std::abs(dv) + std::abs(lv));
  }
  // regression of log(m2(x,y)) against the pair energy gives the alpha of
  // the growth diagnostic m2 <= C^2 exp(-alpha E)
  double sxx = 0, sxy = 0, sx = 0, sy = 0;
  int cnt = 0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      double v = s.k2_at(i, j);
      double dv = (s.k2_at(g.wrap(i + 1), j) - s.k2_at(g.wrap(i - 1), j)) / (2 * h);
      double lv = (s.k2_at(g.wrap(i + 1), j) - 2 * v + s.k2_at(g.wrap(i - 1), j)) / (h * h);
      double m = std::abs(v) + std::abs(dv) + std::abs(lv);
      d.m2 = std::max(d.m2, m);
      ExtReal e = pot.value(std::abs(g.sep(i, j)));
      if (m > 0 && e.finite()) {
        double xx = beta * e.value;
        double yy = std::log(m);
        sx += xx;
        sy += yy;
        sxx += xx * xx;
        sxy += xx * yy;
        ++cnt;
      }
    }
  d.c_fit = std::max(d.m1, std::sqrt(d.m2));
  if (cnt > 1 && sxx * cnt - sx * sx > 1e-12) {
    double slope = (sxy * cnt - sx * sy) / (sxx * cnt - sx * sx);
    d.alpha_fit = std::max(0.0, -slope);
  }
  return d;
}

}  // namespace

const HierarchyState& HierarchyTimeline::at_time(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= 1e-9) return states[i];
  fail(Errc::invalid_argument, "hierarchy timeline has no slice at the requested time");
}

HierarchyTimeline hierarchy_solve(const HierarchyState& init, const RadialPotential& pot, double beta,
                                  const HierarchySolveConfig& cfg) {
  init.validate();
  if (!(cfg.dt > 0)) fail(Errc::invalid_argument, "hierarchy_solve: dt must be positive");
  double h = init.grid.h();
  if (cfg.dt > h * h / (2.0 * cfg.cfl_safety) + 1e-15)
    fail(Errc::invalid_argument, "hierarchy_solve: dt violates the CFL constraint dt <= h^2/(2 safety)");

  long n_steps = std::lround(cfg.t_end / cfg.dt);
  long record_every =
      cfg.record_every > 0 ? std::max<long>(1, std::lround(cfg.record_every / cfg.dt)) : n_steps;

  HierarchyTimeline tl;
  tl.beta = beta;
  HierarchyState cur = init;
  tl.times.push_back(cur.t);
  tl.states.push_back(cur);
  tl.diagnostics.push_back(ruelle_diagnostic(cur, pot, beta));

  for (long step = 1; step <= n_steps; ++step) {
    double before = cur.max_abs();
    HierarchyRhs r1 = hierarchy_rhs(cur, pot, beta);
    HierarchyState s2 = cur;
    axpy_state(s2, cfg.dt / 2, r1);
    HierarchyRhs r2 = hierarchy_rhs(s2, pot, beta);
    HierarchyState s3 = cur;
    axpy_state(s3, cfg.dt / 2, r2);
    HierarchyRhs r3 = hierarchy_rhs(s3, pot, beta);
    HierarchyState s4 = cur;
    axpy_state(s4, cfg.dt, r3);
    HierarchyRhs r4 = hierarchy_rhs(s4, pot, beta);
    axpy_state(cur, cfg.dt / 6, r1);
    axpy_state(cur, cfg.dt / 3, r2);
    axpy_state(cur, cfg.dt / 3, r3);
    axpy_state(cur, cfg.dt / 6, r4);
    cur.t = init.t + step * cfg.dt;
    if (cur.max_abs() > 10 * std::max(before, 1e-300))
      fail(Errc::runtime, "hierarchy_solve: instability, sup norm grew tenfold in one step");
    if (step % record_every == 0 || step == n_steps) {
      tl.times.push_back(cur.t);
      tl.states.push_back(cur);
      tl.diagnostics.push_back(ruelle_diagnostic(cur, pot, beta));
    }
  }
  return tl;
}

double functional_value(const HierarchyState& state, const std::vector<double>& theta) {
  const Grid1& g = state.grid;
  if (static_cast<int>(theta.size()) != g.n)
    fail(Errc::invalid_argument, "functional_value: theta must live on the grid");
  double h = g.h();
  double acc = state.k0;
  for (int i = 0; i < g.n; ++i) acc += h * state.k1_at(i) * theta[i];
  double two = 0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) two += state.k2_at(i, j) * theta[i] * theta[j];
  return acc + 0.5 * h * h * two;
}

namespace {

struct SliceTriple {
  const HierarchyState* prev;
  const HierarchyState* mid;
  const HierarchyState* next;
  double dt;
};

SliceTriple locate(const HierarchyTimeline& tl, double t) {
  std::size_t idx = tl.times.size();
  for (std::size_t i = 0; i < tl.times.size(); ++i)
    if (std::abs(tl.times[i] - t) <= 1e-9) idx = i;
  if (idx >= tl.times.size()) fail(Errc::invalid_argument, "no timeline slice at the requested time");
  if (idx == 0 || idx + 1 >= tl.times.size())
    fail(Errc::invalid_argument, "functional residual needs interior time slices");
  return {&tl.states[idx - 1], &tl.states[idx], &tl.states[idx + 1],
          (tl.times[idx + 1] - tl.times[idx - 1]) / 2};
}

}  // namespace

double functional_evolution_residual(const HierarchyTimeline& tl, const RadialPotential& pot,
                                     const std::vector<double>& theta, double t, double floor) {
  SliceTriple tri = locate(tl, t);
  const HierarchyState& s = *tri.mid;
  const Grid1& g = s.grid;
  double h = g.h();
  double lhs = (functional_value(*tri.next, theta) - functional_value(*tri.prev, theta)) / (2 * tri.dt);

  // delta L / delta theta (x_i) truncated at level two
  std::vector<double> dL(g.n);
  for (int i = 0; i < g.n; ++i) {
    double acc = s.k1_at(i);
    for (int j = 0; j < g.n; ++j) acc += h * s.k2_at(i, j) * theta[j];
    dL[i] = acc;
  }
  double rhs = 0;
  for (int i = 0; i < g.n; ++i) {
    double lap = (theta[g.wrap(i + 1)] - 2 * theta[i] + theta[g.wrap(i - 1)]) / (h * h);
    rhs += 0.5 * h * lap * dL[i];
  }
  double pair = 0;
  for (int i = 0; i < g.n; ++i) {
    double gi = (theta[g.wrap(i + 1)] - theta[g.wrap(i - 1)]) / (2 * h);
    for (int j = 0; j < g.n; ++j) {
      double sij = g.sep(i, j);
      if (std::abs(sij) >= pot.cutoff() || i == j) continue;
      double gj = (theta[g.wrap(j + 1)] - theta[g.wrap(j - 1)]) / (2 * h);
      pair += v_prime(pot, sij) * (gi * (theta[j] + 1) - gj * (theta[i] + 1)) * s.k2_at(i, j);
    }
  }
  rhs -= 0.25 * tl.beta * h * h * pair;
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), floor});
}

double hopf_residual(const HierarchyTimeline& tl, const RadialPotential& pot, const std::vector<double>& phi,
                     double t, double floor) {
  SliceTriple tri = locate(tl, t);
  const HierarchyState& s = *tri.mid;
  const Grid1& g = s.grid;
  double h = g.h();

  std::vector<double> expphi(g.n), theta(g.n);
  for (int i = 0; i < g.n; ++i) {
    expphi[i] = std::exp(phi[i]);
    theta[i] = expphi[i] - 1.0;
  }
  double lhs = (functional_value(*tri.next, theta) - functional_value(*tri.prev, theta)) / (2 * tri.dt);

  std::vector<double> dL(g.n);
  for (int i = 0; i < g.n; ++i) {
    double acc = s.k1_at(i);
    for (int j = 0; j < g.n; ++j) acc += h * s.k2_at(i, j) * theta[j];
    dL[i] = acc;
  }
  // grad phi and (lap phi + |grad phi|^2) realized through e^phi, so the
  // chain rule back to the theta form holds exactly on the grid
  double rhs = 0;
  for (int i = 0; i < g.n; ++i) {
    double lap_exp = (expphi[g.wrap(i + 1)] - 2 * expphi[i] + expphi[g.wrap(i - 1)]) / (h * h);
    double lap_plus = lap_exp / expphi[i];
    rhs += 0.5 * h * lap_plus * (expphi[i] * dL[i]);
  }
  double pair = 0;
  for (int i = 0; i < g.n; ++i) {
    double gi = (expphi[g.wrap(i + 1)] - expphi[g.wrap(i - 1)]) / (2 * h) / expphi[i];
    for (int j = 0; j < g.n; ++j) {
      double sij = g.sep(i, j);
      if (std::abs(sij) >= pot.cutoff() || i == j) continue;
      double gj = (expphi[g.wrap(j + 1)] - expphi[g.wrap(j - 1)]) / (2 * h) / expphi[j];
      pair += v_prime(pot, sij) * (gi - gj) * expphi[i] * expphi[j] * s.k2_at(i, j);
    }
  }
  rhs -= 0.25 * tl.beta * h * h * pair;
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), floor});
}

void QuasiObservableGrid::validate() const {
  if (static_cast<int>(g1.size()) != grid.n || g2.size() != std::size_t(grid.n) * grid.n)
    fail(Errc::invalid_argument, "quasi-observable grids have wrong sizes");
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j) {
      if (std::abs(g2[std::size_t(i) * grid.n + j] - g2[std::size_t(j) * grid.n + i]) > 1e-12)
        fail(Errc::invalid_argument, "quasi-observable level two must be symmetric");
      if (std::abs(grid.sep(i, j)) <= eps && g2[std::size_t(i) * grid.n + j] != 0.0)
        fail(Errc::invalid_argument, "quasi-observable level two must vanish near the diagonal");
    }
}

QuasiObservableGrid apply_H_hat(const QuasiObservableGrid& g, const RadialPotential& pot, double beta) {
  g.validate();
  const Grid1& gr = g.grid;
  int n = gr.n;
  double h = gr.h();
  QuasiObservableGrid out;
  out.grid = gr;
  out.eps = 0;
  out.g0 = 0.0;  // the empty configuration has no sites to move
  out.g1.resize(n);
  for (int i = 0; i < n; ++i) {
    double lap = (g.g1[gr.wrap(i + 1)] - 2 * g.g1[i] + g.g1[gr.wrap(i - 1)]) / (h * h);
    out.g1[i] = -0.5 * lap;
  }
  out.g2.assign(std::size_t(n) * n, 0.0);
  auto at = [&](int i, int j) { return g.g2[std::size_t(gr.wrap(i)) * n + gr.wrap(j)]; };
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double lap_x = (at(i + 1, j) - 2 * at(i, j) + at(i - 1, j)) / (h * h);
      double lap_y = (at(i, j + 1) - 2 * at(i, j) + at(i, j - 1)) / (h * h);
      double acc = -0.5 * (lap_x + lap_y);
      double sij = gr.sep(i, j);
      if (i != j && std::abs(sij) < pot.cutoff()) {
        double dx = (at(i + 1, j) - at(i - 1, j)) / (2 * h);
        double dy = (at(i, j + 1) - at(i, j - 1)) / (2 * h);
        double d1i = (g.g1[gr.wrap(i + 1)] - g.g1[gr.wrap(i - 1)]) / (2 * h);
        double d1j = (g.g1[gr.wrap(j + 1)] - g.g1[gr.wrap(j - 1)]) / (2 * h);
        acc += 0.5 * beta * (v_prime(pot, sij) * (dx + d1i) + v_prime(pot, -sij) * (dy + d1j));
      }
      out.g2[std::size_t(i) * n + j] = acc;
      out.g2[std::size_t(j) * n + i] = acc;
    }
  return out;
}

}  // namespace bogo
