#include "bogo/set_function.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace bogo {

const char* role_name(Role r) {
  switch (r) {
    case Role::quasi_observable: return "quasi_observable";
    case Role::observable: return "observable";
    case Role::measure: return "measure";
    case Role::correlation: return "correlation";
    case Role::coefficients: return "coefficients";
  }
  return "?";
}

SetFunction::SetFunction(std::vector<int> window_sites, Role role)
    : window_(std::move(window_sites)), role_(role) {
  if (!std::is_sorted(window_.begin(), window_.end()) ||
      std::adjacent_find(window_.begin(), window_.end()) != window_.end())
    fail(Errc::invalid_argument, "window sites must be sorted and unique");
  if (window_.size() > 25) fail(Errc::invalid_argument, "window too large for a dense table");
  values_.assign(std::size_t(1) << window_.size(), cplx(0, 0));
}

SetFunction SetFunction::full(const SiteSpace& space, Role role) {
  space.check_enumerable(space.size());
  std::vector<int> w(space.size());
  for (int i = 0; i < space.size(); ++i) w[i] = i;
  return SetFunction(std::move(w), role);
}

Mask SetFunction::window_mask() const {
  Mask m = 0;
  for (int s : window_) m |= Mask(1) << s;
  return m;
}

Mask SetFunction::to_local(Mask global) const {
  Mask local = 0;
  for (int j = 0; j < window_size(); ++j)
    if (global & (Mask(1) << window_[j])) local |= Mask(1) << j;
  if (popcount(local) != popcount(global))
    fail(Errc::domain, "configuration has sites outside the table window");
  return local;
}

Mask SetFunction::to_global(Mask local) const {
  Mask global = 0;
  for (int j = 0; j < window_size(); ++j)
    if (local & (Mask(1) << j)) global |= Mask(1) << window_[j];
  return global;
}

void SetFunction::validate_measure(double tol) const {
  cplx total(0, 0);
  for (const cplx& v : values_) {
    if (std::abs(v.imag()) > tol) fail(Errc::invalid_argument, "measure table has a complex entry");
    if (v.real() < -tol) fail(Errc::invalid_argument, "measure table has a negative entry");
    total += v;
  }
  if (std::abs(total.real() - 1.0) > tol) fail(Errc::invalid_argument, "measure table is not normalized");
}

void SetFunction::validate_correlation(double tol) const {
  if (std::abs(values_[0] - cplx(1, 0)) > tol)
    fail(Errc::invalid_argument, "correlation table must have k(empty) = 1");
}

std::string SetFunction::to_json(const SiteSpace& space) const {
  nlohmann::json j;
  j["window"] = nlohmann::json::array();
  for (int s : window_) j["window"].push_back(space.ids[s]);
  auto entries = nlohmann::json::array();
  for (Mask m = 0; m < values_.size(); ++m) {
    const cplx& v = values_[m];
    if (v == cplx(0, 0)) continue;
    entries.push_back({m, v.real(), v.imag()});
  }
  j["entries"] = std::move(entries);
  j["role"] = role_name(role_);
  return j.dump();
}

SetFunction SetFunction::from_json(const SiteSpace& space, const std::string& text, Role role) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(Errc::parse, std::string("set function JSON: ") + e.what());
  }
  if (!j.contains("window") || !j["window"].is_array()) fail(Errc::parse, "set function JSON: missing 'window'");
  std::vector<int> w;
  for (const auto& id : j["window"]) {
    std::int64_t want = id.get<std::int64_t>();
    int found = -1;
    for (int i = 0; i < space.size(); ++i)
      if (space.ids[i] == want) found = i;
    if (found < 0) fail(Errc::parse, "set function JSON: unknown site id " + std::to_string(want));
    w.push_back(found);
  }
  std::sort(w.begin(), w.end());
  SetFunction f(std::move(w), role);
  if (!j.contains("entries") || !j["entries"].is_array()) fail(Errc::parse, "set function JSON: missing 'entries'");
  for (const auto& e : j["entries"]) {
    if (!e.is_array() || e.size() != 3) fail(Errc::parse, "set function JSON: malformed entry");
    Mask m = e[0].get<Mask>();
    if (m >= f.table_size()) fail(Errc::parse, "set function JSON: entry mask outside window");
    f[m] = cplx(e[1].get<double>(), e[2].get<double>());
  }
  return f;
}

std::vector<double> sigma_products(const SiteSpace& space, const std::vector<int>& window) {
  int n = static_cast<int>(window.size());
  std::vector<double> lam(std::size_t(1) << n, 1.0);
  for (Mask m = 1; m < lam.size(); ++m) {
    Mask low = lowest_bit(m);
    int j = std::countr_zero(low);
    lam[m] = lam[m ^ low] * space.sigma[window[j]];
  }
  return lam;
}

void subset_zeta(std::vector<cplx>& v, int n) {
  for (int j = 0; j < n; ++j) {
    Mask bit = Mask(1) << j;
    for (Mask m = 0; m < v.size(); ++m)
      if (m & bit) v[m] += v[m ^ bit];
  }
}

void subset_mobius(std::vector<cplx>& v, int n) {
  for (int j = 0; j < n; ++j) {
    Mask bit = Mask(1) << j;
    for (Mask m = 0; m < v.size(); ++m)
      if (m & bit) v[m] -= v[m ^ bit];
  }
}

void superset_zeta(std::vector<cplx>& v, int n) {
  for (int j = 0; j < n; ++j) {
    Mask bit = Mask(1) << j;
    for (Mask m = 0; m < v.size(); ++m)
      if (!(m & bit)) v[m] += v[m | bit];
  }
}

void superset_mobius(std::vector<cplx>& v, int n) {
  for (int j = 0; j < n; ++j) {
    Mask bit = Mask(1) << j;
    for (Mask m = 0; m < v.size(); ++m)
      if (!(m & bit)) v[m] -= v[m | bit];
  }
}

cplx eval_multilinear(std::span<const cplx> coeff, std::span<const cplx> point) {
  // fold one coordinate at a time: halves the active table per step
  std::vector<cplx> acc(coeff.begin(), coeff.end());
  std::size_t len = acc.size();
  for (int j = static_cast<int>(point.size()) - 1; j >= 0; --j) {
    len >>= 1;
    for (std::size_t m = 0; m < len; ++m) acc[m] += point[j] * acc[m + len];
  }
  return acc[0];
}

std::vector<cplx> eval_multilinear_cube(std::span<const cplx> coeff, std::span<const cplx> lo,
                                        std::span<const cplx> hi) {
  // After processing coordinate j, bit j of the index stops meaning
  // "monomial contains j" and starts meaning "evaluate with hi[j]".
  std::vector<cplx> acc(coeff.begin(), coeff.end());
  int n = static_cast<int>(lo.size());
  for (int j = 0; j < n; ++j) {
    Mask bit = Mask(1) << j;
    for (Mask m = 0; m < acc.size(); ++m) {
      if (m & bit) continue;
      cplx without = acc[m];
      cplx with = acc[m | bit];
      acc[m] = without + lo[j] * with;
      acc[m | bit] = without + hi[j] * with;
    }
  }
  return acc;
}

}  // namespace bogo
