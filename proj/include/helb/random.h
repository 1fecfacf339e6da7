#ifndef HELB_RANDOM_H_
#define HELB_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>

#include <gmpxx.h>

namespace helb {

// Source of randomness for key generation, encryption and sampling.
//
// Cryptographic mode pulls from the kernel CSPRNG (getrandom). Seeded mode
// runs a fixed-algorithm engine (mt19937_64) so that identical seeds yield
// identical byte streams on every platform; it exists for tests and for
// reproducible CLI runs and must never protect real data.
//
// Satisfies UniformRandomBitGenerator so it can drive <random> distributions.
// Not thread-safe: each thread owns its own instance (see Fork()).
class RandomSource {
 public:
  using result_type = std::uint64_t;

  static RandomSource Cryptographic();
  static RandomSource Seeded(std::uint64_t seed);

  bool seeded() const noexcept { return seed_.has_value(); }
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }

  std::uint64_t NextU64();
  void Fill(std::span<std::uint8_t> out);

  // Uniform in [0, bound); bound must be > 0.
  std::uint64_t UniformU64(std::uint64_t bound);
  // Uniform in [0, bound); bound must be > 0.
  mpz_class Below(const mpz_class& bound);
  // Uniform in [lo, hi); requires lo < hi.
  mpz_class InRange(const mpz_class& lo, const mpz_class& hi);
  // Uniform integer with at most `bits` bits.
  mpz_class Bits(std::size_t bits);

  // Independent child stream. Seeded parents derive a seeded child from
  // their own stream, so forks are reproducible too.
  RandomSource Fork();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return NextU64(); }

 private:
  explicit RandomSource(std::optional<std::uint64_t> seed);

  void Refill();

  std::optional<std::uint64_t> seed_;
  std::mt19937_64 engine_;
  std::uint64_t buffer_[32] = {};
  std::size_t available_ = 0;
};

}  // namespace helb

#endif  // HELB_RANDOM_H_
