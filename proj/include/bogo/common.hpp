#ifndef BOGO_COMMON_HPP
#define BOGO_COMMON_HPP

#include <bit>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace bogo {

using cplx = std::complex<double>;
using Mask = std::uint32_t;

// Error categories; they map 1:1 onto the C API status codes and onto the
// CLI exit codes (parse -> 2, assertion/regime -> 1, runtime -> 3).
enum class Errc {
  invalid_argument = 1,
  domain = 2,
  parse = 3,
  assertion = 4,
  regime = 5,
  no_convergence = 6,
  runtime = 7,
};

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

inline int popcount(Mask m) { return std::popcount(m); }

inline Mask lowest_bit(Mask m) { return m & (~m + 1u); }

// Visits every subset of m, including 0 and m itself.
template <class F>
void for_each_subset(Mask m, F&& f) {
  Mask sub = m;
  for (;;) {
    f(sub);
    if (sub == 0) break;
    sub = (sub - 1) & m;
  }
}

double wall_time_s();

// Runs body(begin, end) over a partition of [0, n); jobs <= 1 runs inline.
// Chunks are fixed by (n, jobs) alone so results never depend on scheduling.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t, std::size_t)>& body);

// --jobs fallback: BOGO_JOBS env var, then hardware concurrency clamped to 8.
int default_jobs();

std::string format_double(double v);  // shortest round-trip decimal, locale-free

}  // namespace bogo

#endif
