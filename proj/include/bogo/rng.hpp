#ifndef BOGO_RNG_HPP
#define BOGO_RNG_HPP

#include <array>
#include <cstdint>

namespace bogo {

// Counter-based generator: Philox-4x32 with 10 rounds.  The algorithm is
// fixed and named in every run manifest ("philox4x32-10") so that streams
// can be reproduced from (seed, stream) in any language.  Derived variates
// are likewise pinned: uniform doubles take the top 53 bits of two counter
// words, normals come from Box-Muller on consecutive uniforms, Poisson uses
// Knuth inversion.
class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  double uniform();                      // [0, 1), 53-bit resolution
  double uniform(double lo, double hi);  // lo + (hi-lo)*uniform()
  double normal();                       // standard normal
  int poisson(double mean);              // mean <= 500
  int uniform_int(int n);                // {0, ..., n-1}, rejection-free modulo bias < 2^-32 avoided

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_;
  int pos_;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace bogo

#endif
