#include "bogo/gibbs.hpp"

#include <cmath>

namespace bogo {

SetFunction gibbs_measure(const SiteSpace& space, const PairPotential& pot) {
  space.validate();
  if (pot.size() != space.size()) fail(Errc::invalid_argument, "potential and site space sizes differ");
  space.check_enumerable(space.size());
  SetFunction mu = SetFunction::full(space, Role::measure);
  auto lam = sigma_products(space, mu.window());
  double z_sum = 0;
  for (Mask g = 0; g < mu.table_size(); ++g) {
    double w = boltzmann_weight(pot.beta(), energy(mu.to_global(g), pot)) * lam[g];
    mu[g] = w;
    z_sum += w;
  }
  if (!(z_sum > 0) || !std::isfinite(z_sum))
    fail(Errc::domain, "gibbs_measure: partition sum is not positive and finite");
  for (Mask g = 0; g < mu.table_size(); ++g) mu[g] /= z_sum;
  return mu;
}

double gnz_residual(const SetFunction& mu, const SiteSpace& space, const PairPotential& pot,
                    const SiteConfigTable& H) {
  mu.validate_measure();
  int n = mu.window_size();
  cplx lhs(0, 0), rhs(0, 0);
  for (Mask g = 0; g < mu.table_size(); ++g) {
    for (int j = 0; j < n; ++j) {
      Mask bit = Mask(1) << j;
      int x = mu.window()[j];
      if (g & bit) {
        lhs += mu[g] * H(x, g ^ bit);
      } else {
        double factor = boltzmann_weight(pot.beta(), interaction(Mask(1) << x, mu.to_global(g), pot));
        rhs += space.sigma[x] * mu[g] * H(x, g) * factor;
      }
    }
  }
  return std::abs(lhs - rhs);
}

double bogoliubov_equation_residual(const SetFunction& L_source, const SiteSpace& space,
                                    const PairPotential& pot, const Field& theta, BogoForm form,
                                    const Field* f) {
  theta.check_finite();
  int n = L_source.window_size();
  const auto& w = L_source.window();

  auto shifted_field = [&](int x, const Field& base) {
    // (1 + base) (e^{-beta phi(x,.)} - 1) + base; the value at x itself is
    // exactly -1 because the diagonal Mayer factor is 0.
    Field out = base;
    for (int j = 0; j < n; ++j) {
      int y = w[j];
      if (y == x) {
        out.value[y] = cplx(-1, 0);
      } else {
        double m = pot.mayer(x, y);
        out.value[y] = (1.0 + base.value[y]) * (m - 1.0) + base.value[y];
      }
    }
    return out;
  };

  if (form == BogoForm::i) {
    double worst = 0;
    for (int j = 0; j < n; ++j) {
      int x = w[j];
      cplx lhs = bogoliubov_site_derivative(L_source, space, theta, x);
      cplx rhs = bogoliubov_eval(L_source, space, shifted_field(x, theta));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
  }

  if (f == nullptr) fail(Errc::invalid_argument, "forms ii and iii need the increment field f");
  f->check_finite();

  Field theta_plus_f = theta;
  for (int j = 0; j < n; ++j) theta_plus_f.value[w[j]] += f->value[w[j]];

  if (form == BogoForm::ii) {
    // t -> L(shift) is a polynomial of degree <= n, so ceil((n+1)/2) nodes
    // integrate it exactly.
    std::vector<double> nodes, weights;
    gauss_legendre_01((n + 1) / 2 + 1, nodes, weights);
    cplx integral(0, 0);
    for (int j = 0; j < n; ++j) {
      int x = w[j];
      cplx inner(0, 0);
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        Field base = theta;
        for (int jj = 0; jj < n; ++jj) base.value[w[jj]] += nodes[q] * f->value[w[jj]];
        inner += weights[q] * bogoliubov_eval(L_source, space, shifted_field(x, base));
      }
      integral += f->value[x] * space.sigma[x] * inner;
    }
    cplx lhs = bogoliubov_eval(L_source, space, theta_plus_f) - bogoliubov_eval(L_source, space, theta);
    return std::abs(lhs - integral);
  }

  // form iii: L(theta + f) = sum_eta e(f,eta) e^{-beta E(eta)} L(shift_W(eta)) lam(eta)
  auto lam = sigma_products(space, L_source.window());
  cplx rhs(0, 0);
  for (Mask eta = 0; eta < L_source.table_size(); ++eta) {
    Mask eta_global = L_source.to_global(eta);
    double boltz = boltzmann_weight(pot.beta(), energy(eta_global, pot));
    if (boltz == 0.0) continue;
    cplx e_f(1, 0);
    for (int j = 0; j < n; ++j)
      if (eta & (Mask(1) << j)) e_f *= f->value[w[j]];
    if (e_f == cplx(0, 0)) continue;
    Field shifted = theta;
    for (int j = 0; j < n; ++j) {
      int y = w[j];
      if (eta & (Mask(1) << j)) {
        shifted.value[y] = cplx(-1, 0);  // y overlaps eta: Mayer factor 0
      } else {
        double m = boltzmann_weight(pot.beta(), interaction(eta_global, Mask(1) << y, pot));
        shifted.value[y] = (1.0 + theta.value[y]) * (m - 1.0) + theta.value[y];
      }
    }
    rhs += e_f * boltz * bogoliubov_eval(L_source, space, shifted) * lam[eta];
  }
  cplx lhs = bogoliubov_eval(L_source, space, theta_plus_f);
  return std::abs(lhs - rhs);
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) fail(Errc::invalid_argument, "gauss_legendre_01: need at least one node");
  nodes.resize(n);
  weights.resize(n);
  // Newton iteration on P_n over [-1,1], then map to [0,1]
  for (int i = 0; i < n; ++i) {
    double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1);
    nodes[i] = 0.5 * (1.0 - x);  // reversed order is irrelevant
    weights[i] = 1.0 / ((1 - x * x) * dp * dp);
  }
}

}  // namespace bogo
