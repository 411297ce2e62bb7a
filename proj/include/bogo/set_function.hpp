#ifndef BOGO_SET_FUNCTION_HPP
#define BOGO_SET_FUNCTION_HPP

#include <span>
#include <string>
#include <vector>

#include "bogo/common.hpp"
#include "bogo/sites.hpp"

namespace bogo {

// What a table means; several operations change behaviour with the role.
enum class Role {
  quasi_observable,  // G on finite configurations
  observable,        // F = KG restricted to a window
  measure,           // probability weights mu
  correlation,       // correlation function k, k(empty) = 1
  coefficients,      // Taylor coefficient table of a functional
};

const char* role_name(Role r);

// Dense table indexed by the subsets of a window.  The window is a sorted
// list of site indices into a SiteSpace; local mask bit j refers to
// window[j].  Tables are immutable in spirit: operations return new tables.
class SetFunction {
 public:
  SetFunction(std::vector<int> window_sites, Role role);
  static SetFunction full(const SiteSpace& space, Role role);

  int window_size() const { return static_cast<int>(window_.size()); }
  std::size_t table_size() const { return values_.size(); }
  const std::vector<int>& window() const { return window_; }
  Mask window_mask() const;  // global mask of the window sites

  Role role() const { return role_; }
  void set_role(Role r) { role_ = r; }

  cplx& operator[](Mask local) { return values_[local]; }
  const cplx& operator[](Mask local) const { return values_[local]; }
  std::span<const cplx> values() const { return values_; }
  std::vector<cplx>& mutable_values() { return values_; }

  // Maps a global site mask to this window's local mask; fails if bits fall
  // outside the window.
  Mask to_local(Mask global) const;
  Mask to_global(Mask local) const;

  bool same_window(const SetFunction& other) const { return window_ == other.window_; }

  void validate_measure(double tol = 1e-9) const;      // real, >= 0, sums to 1
  void validate_correlation(double tol = 1e-9) const;  // k(empty) = 1

  // JSON form: {"window":[site ids], "entries":[[mask, re, im], ...]};
  // bit i of a mask selects the i-th window site.  Zero entries are omitted.
  std::string to_json(const SiteSpace& space) const;
  static SetFunction from_json(const SiteSpace& space, const std::string& text, Role role);

 private:
  std::vector<int> window_;
  std::vector<cplx> values_;
  Role role_;
};

// lam[m] = prod_{x in m} sigma_x for every local mask of the window.
std::vector<double> sigma_products(const SiteSpace& space, const std::vector<int>& window);

// In-place zeta transform over the subset lattice: out[S] = sum_{T subset S} in[T].
void subset_zeta(std::vector<cplx>& v, int n);
// Inverse of subset_zeta: out[S] = sum_{T subset S} (-1)^{|S\T|} in[T].
void subset_mobius(std::vector<cplx>& v, int n);
// Superset sum: out[S] = sum_{T superset S} in[T].
void superset_zeta(std::vector<cplx>& v, int n);
// Inverse: out[S] = sum_{T superset S} (-1)^{|T\S|} in[T].
void superset_mobius(std::vector<cplx>& v, int n);

// Value of the multilinear polynomial sum_m coeff[m] prod_{j in m} point[j].
cplx eval_multilinear(std::span<const cplx> coeff, std::span<const cplx> point);

// Evaluates the same polynomial at all 2^n vertices u^S with
// u^S_j = lo[j] for j not in S and hi[j] for j in S, in O(n 2^n).
std::vector<cplx> eval_multilinear_cube(std::span<const cplx> coeff, std::span<const cplx> lo,
                                        std::span<const cplx> hi);

}  // namespace bogo

#endif
