#ifndef BOGO_HIERARCHY_HPP
#define BOGO_HIERARCHY_HPP

#include <vector>

#include "bogo/potential.hpp"

namespace bogo {

// Uniform periodic grid on [0, length).
struct Grid1 {
  int n = 0;
  double length = 0;

  double h() const { return length / n; }
  double x(int i) const { return i * h(); }
  int wrap(int i) const { return ((i % n) + n) % n; }
  // signed minimum-image separation x(i) - x(j)
  double sep(int i, int j) const;
};

enum class Closure { none, zero, product };

// Gridded correlation functions k^(1), k^(2) with a truncation closure for
// k^(3).  k^(0) == 1 is carried along and never touched by the evolution.
// The translation-invariant mode stores k^(1) as a scalar and k^(2) as a
// function of separation only.
struct HierarchyState {
  Grid1 grid;
  double t = 0;
  Closure closure = Closure::none;
  bool invariant = false;
  double k0 = 1.0;

  std::vector<double> k1;  // full mode: size n
  std::vector<double> k2;  // full mode: size n*n, symmetric

  double k1_value = 0;         // invariant mode
  std::vector<double> k2_sep;  // invariant mode: size n, even under s -> n-s

  static HierarchyState full(Grid1 grid, std::vector<double> k1, std::vector<double> k2, Closure closure);
  static HierarchyState invariant(Grid1 grid, double k1, std::vector<double> k2_sep, Closure closure);
  // constant profiles k1 = z, k2 = z^2 (uncorrelated start)
  static HierarchyState poisson(Grid1 grid, double z, Closure closure, bool invariant_mode);

  HierarchyState expanded() const;  // invariant -> full storage
  double k1_at(int i) const { return invariant ? k1_value : k1[i]; }
  double k2_at(int i, int j) const;
  double max_abs() const;
  void validate() const;
};

// Time derivative of (k1, k2) under the diffusion hierarchy truncated at
// level two:
//   dk^(n)/dt = 1/2 sum_k lap_{x_k} k^(n)
//             + (beta/2) sum_{k != j} V''(x_k - x_j) k^(n)
//             + (beta/2) sum_{k != j} V'(x_k - x_j) d_{x_k} k^(n)
//             + (beta/2) sum_k int V'(x_k - y) d_{x_k} k^(n+1)(..., y) dy
//             + (beta/2) sum_k int V''(x_k - y) k^(n+1)(..., y) dy,
// with k^(3) supplied by the closure (zero, or the symmetrized product
// (k2(a,b)k1(c) + k2(a,c)k1(b) + k2(b,c)k1(a))/3).  Spatial derivatives are
// centered, integrals use the trapezoid rule over the cutoff ball.
struct HierarchyRhs {
  std::vector<double> dk1;
  std::vector<double> dk2;
  double dk1_value = 0;
  std::vector<double> dk2_sep;
};
HierarchyRhs hierarchy_rhs(const HierarchyState& state, const RadialPotential& pot, double beta);

struct RuelleDiagnostic {
  double m1 = 0;      // max over the grid of |k1| + |k1'| + |k1''|
  double m2 = 0;      // same for k2
  double c_fit = 0;   // smallest C with m_n <= C^n at alpha = 0
  double alpha_fit = 0;  // regression slope of log m2 against pair energy, clamped >= 0
};

struct HierarchyTimeline {
  std::vector<double> times;
  std::vector<HierarchyState> states;
  std::vector<RuelleDiagnostic> diagnostics;
  double beta = 0;

  const HierarchyState& at_time(double t) const;
};

struct HierarchySolveConfig {
  double t_end = 0;
  double dt = 0;
  double record_every = 0;  // 0 records only the final state
  double cfl_safety = 1.0;  // requires dt <= h^2 / (2 * safety)
};

// Method of lines with classical RK4.  Preserves k^(0) == 1 and the
// symmetry of k^(2); aborts when the sup norm grows tenfold in one step.
HierarchyTimeline hierarchy_solve(const HierarchyState& init, const RadialPotential& pot, double beta,
                                  const HierarchySolveConfig& cfg);

// Truncated generating functional L_t(theta) = 1 + int k1 theta
// + 1/2 iint k2 theta theta evaluated by the trapezoid rule.
double functional_value(const HierarchyState& state, const std::vector<double>& theta);

// Relative residual |dL/dt - RHS| / max(|dL/dt|, |RHS|, floor) of the
// functional evolution equation
//   dL_t(theta)/dt = 1/2 int lap theta delta L/delta theta
//     - beta/4 iint V'(x-y) [theta'(x)(theta(y)+1) - theta'(y)(theta(x)+1)]
//       delta^2 L / delta theta delta theta,
// with the delta-derivatives taken from the truncated k_t and dL/dt by a
// centered difference of neighbouring recorded slices.
double functional_evolution_residual(const HierarchyTimeline& tl, const RadialPotential& pot,
                                     const std::vector<double>& theta, double t, double floor = 1e-12);

// Same balance for the log-Laplace transform under theta = e^phi - 1.  The
// phi-derivative factors are realized through grid differences of e^phi, so
// the substitution identity with the residual above is exact on the grid.
double hopf_residual(const HierarchyTimeline& tl, const RadialPotential& pot,
                     const std::vector<double>& phi, double t, double floor = 1e-12);

// Quasi-observable on levels 0..2 with an exclusion zone of width eps
// around the pair diagonal.
struct QuasiObservableGrid {
  Grid1 grid;
  double g0 = 0;
  std::vector<double> g1;
  std::vector<double> g2;
  double eps = 0;

  void validate() const;
};

// The generator on quasi-observables, levels 0..2 with centered stencils:
//   (HG)(eta) = -1/2 (lap G)(eta)
//     + (beta/2) sum_{x in eta} sum_{y in eta\x} V'(x - y)
//         [ (grad G)(eta, x) + (grad G)(eta\{y}, x) ].
// Level n of the output depends only on input levels n and n-1.
QuasiObservableGrid apply_H_hat(const QuasiObservableGrid& g, const RadialPotential& pot, double beta);

}  // namespace bogo

#endif
