#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sme {

//! Mixes a base seed with a stream tag so that derived generators are
//! decorrelated (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag)
{
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

//! Seeded random stream. Wraps mt19937_64 with explicit transforms so the
//! produced sequences do not depend on the standard library's distribution
//! implementations.
class Rng
{
public:
  explicit Rng(std::uint64_t seed)
    : seed_(seed)
    , gen_(seed)
  {
  }

  std::uint64_t seed() const { return seed_; }

  //! Uniform on (0, 1].
  double uniform()
  {
    // 53-bit mantissa, shifted away from zero
    const std::uint64_t r = gen_() >> 11;
    return (static_cast<double>(r) + 1.0) * 0x1p-53;
  }

  //! Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * (uniform() - 0x1p-53); }

  //! Standard normal via Box-Muller (fixed two-uniform consumption).
  double normal()
  {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  //! Uniform integer in [0, n).
  std::size_t index(std::size_t n)
  {
    const std::uint64_t limit = ~std::uint64_t{ 0 } - ~std::uint64_t{ 0 } % n;
    std::uint64_t r;
    do {
      r = gen_();
    } while (r >= limit);
    return static_cast<std::size_t>(r % n);
  }

  //! Child stream for an independent purpose; unaffected by draws made so far.
  Rng derive(std::uint64_t tag) const { return Rng(mix_seed(seed_, tag)); }

private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  double spare_{ 0.0 };
  bool have_spare_{ false };
};

} // namespace sme
