#ifndef BOGO_POTENTIAL_HPP
#define BOGO_POTENTIAL_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bogo/common.hpp"
#include "bogo/sites.hpp"

namespace bogo {

// Real value extended with +infinity (hard cores).  Infinities never enter
// floating-point sums; the flag propagates instead and the Mayer factor of
// an infinite energy is an exact 0.
struct ExtReal {
  double value = 0;
  bool inf = false;

  static ExtReal infinite() { return {0, true}; }
  ExtReal& operator+=(const ExtReal& o) {
    inf = inf || o.inf;
    if (!inf) value += o.value;
    return *this;
  }
  friend ExtReal operator+(ExtReal a, const ExtReal& b) { return a += b; }
  bool finite() const { return !inf; }
};

inline double mayer_factor_of(double beta, const ExtReal& phi) {
  if (phi.inf) return 0.0;
  return std::exp(-beta * phi.value);
}

// Radial pair interaction V(r) with compact support (cutoff).  Forms with a
// continuous force at the cutoff are safe for the dynamics engines; the
// hard core form is for sampling only.
class RadialPotential {
 public:
  enum class Form { hardcore, lj_cut, gauss, bump, table };

  static RadialPotential hardcore(double radius);
  // Force-shifted Lennard-Jones: V and V' continuous and 0 at the cutoff.
  static RadialPotential lj_cut(double epsilon, double sigma, double cutoff);
  // Force-shifted Gaussian A exp(-r^2 / (2 w^2)); V(rc) = V'(rc) = 0.
  static RadialPotential gauss(double amplitude, double width, double cutoff);
  // A (1 - (r/rc)^2)^3: C^2 with V, V', V'' all vanishing at the cutoff.
  static RadialPotential bump(double amplitude, double cutoff);
  // Piecewise-cubic interpolation of samples on [0, cutoff].
  static RadialPotential table(std::vector<double> r, std::vector<double> v);

  Form form() const { return form_; }
  double cutoff() const { return cutoff_; }
  bool has_hard_core() const { return form_ == Form::hardcore; }
  double core_radius() const { return form_ == Form::hardcore ? params_[0] : 0.0; }

  ExtReal value(double r) const;
  double deriv(double r) const;   // V'(r), finite forms only
  double second(double r) const;  // V''(r), finite forms only
  bool positive() const;          // V >= 0 everywhere

  // {"form": ..., params...} per the potential JSON schema.
  std::string to_json() const;
  static RadialPotential from_json(const std::string& text);
  static RadialPotential from_json_obj(const void* json_obj);  // nlohmann::json const*

 private:
  RadialPotential() = default;
  Form form_ = Form::gauss;
  double cutoff_ = 0;
  std::vector<double> params_;
  std::vector<double> table_r_, table_v_;
};

// Symmetric pair potential over the sites of a SiteSpace, with inverse
// temperature beta and lower bound phi >= -2B.  Mayer factors use the
// diagonal convention e^{-beta phi(x,x)} := 0.
class PairPotential {
 public:
  static PairPotential from_matrix(std::vector<std::vector<ExtReal>> phi, double beta);
  // Radial potential evaluated on site distances; optional period applies
  // the minimum-image rule on each coordinate.
  static PairPotential from_radial(const RadialPotential& v, const SiteSpace& space, double beta,
                                   std::optional<double> period = std::nullopt);

  int size() const { return n_; }
  double beta() const { return beta_; }
  double semibound_B() const { return B_; }  // smallest B >= 0 with phi >= -2B
  bool positive_off_diagonal() const;

  ExtReal phi(int x, int y) const;
  // e^{-beta phi(x,y)}; exactly 0 on the diagonal and for hard-core pairs.
  double mayer(int x, int y) const { return x == y ? 0.0 : mayer_factor_of(beta_, phi(x, y)); }

 private:
  int n_ = 0;
  double beta_ = 1;
  double B_ = 0;
  std::vector<ExtReal> phi_;  // row-major n x n
};

// E(eta) = sum over unordered pairs inside eta; E(empty) = E({x}) = 0.
ExtReal energy(Mask eta, const PairPotential& pot);
// W(eta, gamma) = sum_{x in eta, y in gamma} phi(x, y); overlapping sites
// fall under the diagonal convention and give +infinity.
ExtReal interaction(Mask eta, Mask gamma, const PairPotential& pot);
// exp(-beta * e), exactly 0 when e is infinite
inline double boltzmann_weight(double beta, const ExtReal& e) {
  return e.inf ? 0.0 : std::exp(-beta * e.value);
}

// Discrete Mayer norm max_x sum_y |e^{-beta phi(x,y)} - 1| sigma_y; the
// diagonal contributes sigma_x.
double mayer_norm(const PairPotential& pot, const SiteSpace& space);
// Continuum form z * integral over the cutoff ball of |e^{-beta V} - 1|.
double mayer_norm_continuum(const RadialPotential& v, double beta, double z, int dim,
                            int quad_points = 20000);

struct EnergyReport {
  ExtReal E;
  ExtReal W;
  double C_beta = 0;
};

}  // namespace bogo

#endif
