#pragma once
// Deterministic random number generation. All randomness in the library flows
// through Rng so that a (seed, stream label) pair fully determines every
// sampled value. We avoid std::uniform_real_distribution / normal_distribution
// on purpose: their output is not bit-stable across standard library versions,
// and reports must be byte-identical across reruns.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace dqp {

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

class Rng {
 public:
  explicit Rng(std::uint64_t seed)
      : root_(seed), gen_(detail::splitmix64(seed)) {}

  // Independent stream derived from the *construction* seed (not from the
  // current stream position), so derivation order never matters.
  Rng derive(std::string_view label) const {
    return Rng(detail::splitmix64(root_ ^ detail::fnv1a64(label)));
  }
  Rng derive(std::string_view label, std::uint64_t index) const {
    return Rng(detail::splitmix64(root_ ^ detail::fnv1a64(label)) +
               0x9e3779b97f4a7c15ULL * (index + 1));
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on {0, ..., n-1}, unbiased via rejection of the low residue band.
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // == 2^64 mod n
    std::uint64_t x = next_u64();
    while (x < threshold) x = next_u64();
    return x % n;
  }

  bool bit() { return (next_u64() >> 63) != 0; }

  // Standard normal via Box-Muller; pairs are generated together.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

 private:
  std::uint64_t root_;
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dqp
