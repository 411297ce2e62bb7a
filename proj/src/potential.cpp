#include "bogo/potential.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace bogo {

namespace {

double lj_raw(double eps, double s, double r) {
  double sr6 = std::pow(s / r, 6);
  return 4 * eps * (sr6 * sr6 - sr6);
}
double lj_raw_d(double eps, double s, double r) {
  double sr6 = std::pow(s / r, 6);
  return 4 * eps * (-12 * sr6 * sr6 + 6 * sr6) / r;
}
double lj_raw_dd(double eps, double s, double r) {
  double sr6 = std::pow(s / r, 6);
  return 4 * eps * (156 * sr6 * sr6 - 42 * sr6) / (r * r);
}

double gauss_raw(double a, double w, double r) { return a * std::exp(-r * r / (2 * w * w)); }
double gauss_raw_d(double a, double w, double r) { return -r / (w * w) * gauss_raw(a, w, r); }
double gauss_raw_dd(double a, double w, double r) {
  return (r * r / (w * w) - 1.0) / (w * w) * gauss_raw(a, w, r);
}

}  // namespace

RadialPotential RadialPotential::hardcore(double radius) {
  if (!(radius > 0)) fail(Errc::invalid_argument, "hardcore potential needs a positive radius");
  RadialPotential p;
  p.form_ = Form::hardcore;
  p.cutoff_ = radius;
  p.params_ = {radius};
  return p;
}

RadialPotential RadialPotential::lj_cut(double epsilon, double sigma, double cutoff) {
  if (!(cutoff > sigma * 0.5)) fail(Errc::invalid_argument, "lj-cut cutoff too small");
  RadialPotential p;
  p.form_ = Form::lj_cut;
  p.cutoff_ = cutoff;
  p.params_ = {epsilon, sigma, lj_raw(epsilon, sigma, cutoff), lj_raw_d(epsilon, sigma, cutoff)};
  return p;
}

RadialPotential RadialPotential::gauss(double amplitude, double width, double cutoff) {
  if (!(width > 0) || !(cutoff > 0)) fail(Errc::invalid_argument, "gauss potential needs width, cutoff > 0");
  RadialPotential p;
  p.form_ = Form::gauss;
  p.cutoff_ = cutoff;
  p.params_ = {amplitude, width, gauss_raw(amplitude, width, cutoff), gauss_raw_d(amplitude, width, cutoff)};
  return p;
}

RadialPotential RadialPotential::bump(double amplitude, double cutoff) {
  if (!(cutoff > 0)) fail(Errc::invalid_argument, "bump potential needs cutoff > 0");
  RadialPotential p;
  p.form_ = Form::bump;
  p.cutoff_ = cutoff;
  p.params_ = {amplitude, cutoff};
  return p;
}

RadialPotential RadialPotential::table(std::vector<double> r, std::vector<double> v) {
  if (r.size() < 4 || r.size() != v.size()) fail(Errc::invalid_argument, "table potential needs >= 4 samples");
  if (!std::is_sorted(r.begin(), r.end())) fail(Errc::invalid_argument, "table potential radii must increase");
  RadialPotential p;
  p.form_ = Form::table;
  p.cutoff_ = r.back();
  p.table_r_ = std::move(r);
  p.table_v_ = std::move(v);
  return p;
}

ExtReal RadialPotential::value(double r) const {
  if (r >= cutoff_) return {0, false};
  switch (form_) {
    case Form::hardcore:
      return ExtReal::infinite();
    case Form::lj_cut:
      return {lj_raw(params_[0], params_[1], r) - params_[2] - (r - cutoff_) * params_[3], false};
    case Form::gauss:
      return {gauss_raw(params_[0], params_[1], r) - params_[2] - (r - cutoff_) * params_[3], false};
    case Form::bump: {
      double u = 1.0 - (r / params_[1]) * (r / params_[1]);
      return {params_[0] * u * u * u, false};
    }
    case Form::table: {
      // piecewise linear in r; simple and monotone-safe
      auto it = std::upper_bound(table_r_.begin(), table_r_.end(), r);
      std::size_t hi = std::min<std::size_t>(table_r_.size() - 1, std::distance(table_r_.begin(), it));
      if (hi == 0) return {table_v_.front(), false};
      std::size_t lo = hi - 1;
      double t = (r - table_r_[lo]) / (table_r_[hi] - table_r_[lo]);
      return {table_v_[lo] * (1 - t) + table_v_[hi] * t, false};
    }
  }
  return {0, false};
}

double RadialPotential::deriv(double r) const {
  if (r >= cutoff_) return 0;
  switch (form_) {
    case Form::hardcore:
      fail(Errc::domain, "hard-core potential is not differentiable");
    case Form::lj_cut:
      return lj_raw_d(params_[0], params_[1], r) - params_[3];
    case Form::gauss:
      return gauss_raw_d(params_[0], params_[1], r) - params_[3];
    case Form::bump: {
      double rc = params_[1];
      double u = 1.0 - (r / rc) * (r / rc);
      return params_[0] * 3 * u * u * (-2 * r / (rc * rc));
    }
    case Form::table: {
      double h = (table_r_.back() - table_r_.front()) / (table_r_.size() - 1);
      double lo = std::max(table_r_.front(), r - 0.5 * h);
      double hi = std::min(table_r_.back(), r + 0.5 * h);
      return (value(hi).value - value(lo).value) / (hi - lo);
    }
  }
  return 0;
}

double RadialPotential::second(double r) const {
  if (r >= cutoff_) return 0;
  switch (form_) {
    case Form::hardcore:
      fail(Errc::domain, "hard-core potential is not differentiable");
    case Form::lj_cut:
      return lj_raw_dd(params_[0], params_[1], r);
    case Form::gauss:
      return gauss_raw_dd(params_[0], params_[1], r);
    case Form::bump: {
      double rc = params_[1];
      double s = r / rc;
      double u = 1.0 - s * s;
      return params_[0] * (24 * s * s * u - 6 * u * u) / (rc * rc);
    }
    case Form::table: {
      double h = (table_r_.back() - table_r_.front()) / (table_r_.size() - 1);
      return (deriv(std::min(table_r_.back(), r + 0.5 * h)) - deriv(std::max(table_r_.front(), r - 0.5 * h))) /
             (std::min(table_r_.back(), r + 0.5 * h) - std::max(table_r_.front(), r - 0.5 * h));
    }
  }
  return 0;
}

bool RadialPotential::positive() const {
  if (form_ == Form::hardcore || form_ == Form::bump) return true;
  int n = 4096;
  for (int i = 0; i <= n; ++i) {
    double r = cutoff_ * (i + 0.5) / (n + 1);
    ExtReal v = value(r);
    if (v.finite() && v.value < -1e-12) return false;
  }
  return true;
}

std::string RadialPotential::to_json() const {
  nlohmann::json v;
  switch (form_) {
    case Form::hardcore:
      v = {{"form", "hardcore"}, {"radius", params_[0]}};
      break;
    case Form::lj_cut:
      v = {{"form", "lj-cut"}, {"epsilon", params_[0]}, {"sigma", params_[1]}};
      break;
    case Form::gauss:
      v = {{"form", "gauss"}, {"amplitude", params_[0]}, {"width", params_[1]}};
      break;
    case Form::bump:
      v = {{"form", "bump"}, {"amplitude", params_[0]}};
      break;
    case Form::table:
      v = {{"form", "table"}, {"r", table_r_}, {"v", table_v_}};
      break;
  }
  v["cutoff"] = cutoff_;
  return v.dump();
}

RadialPotential RadialPotential::from_json_obj(const void* obj) {
  const nlohmann::json& v = *static_cast<const nlohmann::json*>(obj);
  if (!v.contains("form")) fail(Errc::parse, "potential JSON: missing field 'V.form'");
  std::string form = v["form"].get<std::string>();
  auto need = [&](const char* key) -> double {
    if (!v.contains(key)) fail(Errc::parse, std::string("potential JSON: missing field 'V.") + key + "'");
    return v[key].get<double>();
  };
  if (form == "hardcore") return hardcore(need("radius"));
  if (form == "lj-cut") return lj_cut(need("epsilon"), need("sigma"), need("cutoff"));
  if (form == "gauss") return gauss(need("amplitude"), need("width"), need("cutoff"));
  if (form == "bump") return bump(need("amplitude"), need("cutoff"));
  if (form == "table") {
    if (!v.contains("r") || !v.contains("v")) fail(Errc::parse, "potential JSON: table needs 'r' and 'v'");
    return table(v["r"].get<std::vector<double>>(), v["v"].get<std::vector<double>>());
  }
  fail(Errc::parse, "potential JSON: unknown form '" + form + "'");
}

RadialPotential RadialPotential::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(Errc::parse, std::string("potential JSON: ") + e.what());
  }
  return from_json_obj(&j);
}

PairPotential PairPotential::from_matrix(std::vector<std::vector<ExtReal>> phi, double beta) {
  PairPotential p;
  p.n_ = static_cast<int>(phi.size());
  p.beta_ = beta;
  if (!(beta >= 0)) fail(Errc::invalid_argument, "beta must be >= 0");
  p.phi_.resize(std::size_t(p.n_) * p.n_);
  double min_phi = 0;
  for (int i = 0; i < p.n_; ++i) {
    if (static_cast<int>(phi[i].size()) != p.n_) fail(Errc::invalid_argument, "potential matrix must be square");
    for (int j = 0; j < p.n_; ++j) {
      if (i != j) {
        const ExtReal &a = phi[i][j], &b = phi[j][i];
        if (a.inf != b.inf || (!a.inf && std::abs(a.value - b.value) > 1e-12))
          fail(Errc::invalid_argument, "potential matrix must be symmetric");
        if (!a.inf) min_phi = std::min(min_phi, a.value);
      }
      p.phi_[std::size_t(i) * p.n_ + j] = phi[i][j];
    }
  }
  p.B_ = std::max(0.0, -min_phi / 2.0);
  return p;
}

PairPotential PairPotential::from_radial(const RadialPotential& v, const SiteSpace& space, double beta,
                                         std::optional<double> period) {
  int n = space.size();
  std::vector<std::vector<ExtReal>> phi(n, std::vector<ExtReal>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double r2 = 0;
      for (int c = 0; c < space.dim; ++c) {
        double d = space.pos[i][c] - space.pos[j][c];
        if (period) d -= *period * std::round(d / *period);
        r2 += d * d;
      }
      phi[i][j] = i == j ? ExtReal{0, false} : v.value(std::sqrt(r2));
    }
  return from_matrix(std::move(phi), beta);
}

bool PairPotential::positive_off_diagonal() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (i != j) {
        const ExtReal& p = phi(i, j);
        if (!p.inf && p.value < 0) return false;
      }
  return true;
}

ExtReal PairPotential::phi(int x, int y) const { return phi_[std::size_t(x) * n_ + y]; }

ExtReal energy(Mask eta, const PairPotential& pot) {
  ExtReal e;
  for (int i = 0; i < pot.size(); ++i) {
    if (!(eta & (Mask(1) << i))) continue;
    for (int j = i + 1; j < pot.size(); ++j)
      if (eta & (Mask(1) << j)) e += pot.phi(i, j);
  }
  return e;
}

ExtReal interaction(Mask eta, Mask gamma, const PairPotential& pot) {
  ExtReal w;
  for (int i = 0; i < pot.size(); ++i) {
    if (!(eta & (Mask(1) << i))) continue;
    for (int j = 0; j < pot.size(); ++j) {
      if (!(gamma & (Mask(1) << j))) continue;
      if (i == j) return ExtReal::infinite();  // overlap falls under the diagonal convention
      w += pot.phi(i, j);
    }
  }
  return w;
}

double mayer_norm(const PairPotential& pot, const SiteSpace& space) {
  double best = 0;
  for (int x = 0; x < pot.size(); ++x) {
    double acc = 0;
    for (int y = 0; y < pot.size(); ++y) acc += std::abs(pot.mayer(x, y) - 1.0) * space.sigma[y];
    best = std::max(best, acc);
  }
  return best;
}

double mayer_norm_continuum(const RadialPotential& v, double beta, double z, int dim, int quad_points) {
  if (dim < 1 || dim > 3) fail(Errc::invalid_argument, "mayer_norm_continuum: dim must be 1, 2 or 3");
  double rc = v.cutoff();
  // hard core contributes the exact ball volume
  double acc = 0;
  double h = rc / quad_points;
  auto shell = [&](double r) {
    if (dim == 1) return 2.0;
    if (dim == 2) return 2 * 3.14159265358979323846 * r;
    return 4 * 3.14159265358979323846 * r * r;
  };
  for (int i = 0; i < quad_points; ++i) {
    double r = (i + 0.5) * h;
    ExtReal val = v.value(r);
    double f = val.inf ? 1.0 : std::abs(std::exp(-beta * val.value) - 1.0);
    acc += f * shell(r) * h;
  }
  return z * acc;
}

}  // namespace bogo
