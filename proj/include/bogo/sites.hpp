#ifndef BOGO_SITES_HPP
#define BOGO_SITES_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "bogo/common.hpp"

namespace bogo {

// Finite discrete site space: the arena for exact subset combinatorics.
// Each site carries a position in R^d and a weight sigma_x > 0 (activity
// times cell volume).  Everything that enumerates 2^N subsets is guarded by
// enum_cap.
struct SiteSpace {
  std::vector<std::int64_t> ids;           // unique site identifiers
  std::vector<std::array<double, 3>> pos;  // per-site position, dims beyond `dim` are zero
  int dim = 1;
  std::vector<double> sigma;  // per-site weight, > 0
  int enum_cap = 20;

  int size() const { return static_cast<int>(sigma.size()); }
  Mask full_mask() const { return size() >= 32 ? ~Mask(0) : ((Mask(1) << size()) - 1u); }
  void validate() const;
  void check_enumerable(int n_sites) const;

  // n sites on a line with spacing `cell`, sigma = z * cell, ids 0..n-1.
  static SiteSpace line(int n, double cell, double z);
  // n sites with constant weight and integer positions.
  static SiteSpace uniform(int n, double sigma_value);
};

// Per-site complex field theta restricted to a window; entries must be finite.
struct Field {
  std::vector<cplx> value;

  int size() const { return static_cast<int>(value.size()); }
  static Field zeros(int n) { return Field{std::vector<cplx>(static_cast<std::size_t>(n), cplx(0, 0))}; }
  static Field constant(int n, cplx v) { return Field{std::vector<cplx>(static_cast<std::size_t>(n), v)}; }
  void check_finite() const;
};

// ||theta|| = sum_x |theta_x| sigma_x over the sites selected by `window`.
double l1_norm(const Field& theta, const SiteSpace& space, Mask window);

}  // namespace bogo

#endif
