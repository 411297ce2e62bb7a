#include "bogo/sites.hpp"

#include <cmath>
#include <set>
#include <string>

namespace bogo {

void SiteSpace::validate() const {
  int n = size();
  if (n < 1) fail(Errc::invalid_argument, "site space must contain at least one site");
  if (n > 31) fail(Errc::invalid_argument, "site space larger than 31 sites is not representable");
  if (static_cast<int>(ids.size()) != n || static_cast<int>(pos.size()) != n)
    fail(Errc::invalid_argument, "site space fields have inconsistent lengths");
  if (dim < 1 || dim > 3) fail(Errc::invalid_argument, "site space dim must be 1, 2 or 3");
  std::set<std::int64_t> seen(ids.begin(), ids.end());
  if (static_cast<int>(seen.size()) != n) fail(Errc::invalid_argument, "site identifiers must be unique");
  for (double s : sigma)
    if (!(s > 0) || !std::isfinite(s)) fail(Errc::invalid_argument, "site weights must be positive and finite");
}

void SiteSpace::check_enumerable(int n_sites) const {
  if (n_sites > enum_cap)
    fail(Errc::invalid_argument,
         "operation enumerates 2^" + std::to_string(n_sites) + " subsets, above the cap of 2^" +
             std::to_string(enum_cap));
}

SiteSpace SiteSpace::line(int n, double cell, double z) {
  SiteSpace s;
  s.dim = 1;
  s.ids.resize(n);
  s.pos.resize(n);
  s.sigma.assign(n, z * cell);
  for (int i = 0; i < n; ++i) {
    s.ids[i] = i;
    s.pos[i] = {cell * i, 0.0, 0.0};
  }
  s.validate();
  return s;
}

SiteSpace SiteSpace::uniform(int n, double sigma_value) { return line(n, 1.0, sigma_value); }

void Field::check_finite() const {
  for (const cplx& v : value)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(Errc::domain, "field has a non-finite entry");
}

double l1_norm(const Field& theta, const SiteSpace& space, Mask window) {
  double acc = 0;
  for (int i = 0; i < space.size(); ++i)
    if (window & (Mask(1) << i)) acc += std::abs(theta.value[i]) * space.sigma[i];
  return acc;
}

}  // namespace bogo
