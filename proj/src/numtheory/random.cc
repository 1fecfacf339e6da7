#include "helb/random.h"

#include <sys/random.h>

#include <cerrno>
#include <cstring>
#include <string>

#include "helb/error.h"

namespace helb {

RandomSource::RandomSource(std::optional<std::uint64_t> seed) : seed_(seed) {
  if (seed_) engine_.seed(*seed_);
}

RandomSource RandomSource::Cryptographic() {
  return RandomSource(std::nullopt);
}

RandomSource RandomSource::Seeded(std::uint64_t seed) {
  return RandomSource(seed);
}

void RandomSource::Refill() {
  constexpr std::size_t kWords = sizeof(buffer_) / sizeof(buffer_[0]);
  if (seed_) {
    for (auto& word : buffer_) word = engine_();
  } else {
    auto* bytes = reinterpret_cast<std::uint8_t*>(buffer_);
    std::size_t filled = 0;
    while (filled < sizeof(buffer_)) {
      ssize_t got = getrandom(bytes + filled, sizeof(buffer_) - filled, 0);
      if (got < 0) {
        if (errno == EINTR) continue;
        throw Error(ErrorCode::kIo,
                    std::string("getrandom failed: ") + std::strerror(errno));
      }
      filled += static_cast<std::size_t>(got);
    }
  }
  available_ = kWords;
}

std::uint64_t RandomSource::NextU64() {
  if (available_ == 0) Refill();
  return buffer_[--available_];
}

void RandomSource::Fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t word = NextU64();
    for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(word >> (8 * b));
    }
  }
}

std::uint64_t RandomSource::UniformU64(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "empty range");
  // Rejection sampling on the largest multiple of bound.
  const std::uint64_t limit = max() - (max() % bound + 1) % bound;
  std::uint64_t x;
  do {
    x = NextU64();
  } while (x > limit);
  return x % bound;
}

mpz_class RandomSource::Bits(std::size_t bits) {
  mpz_class out = 0;
  std::size_t words = (bits + 63) / 64;
  for (std::size_t i = 0; i < words; ++i) {
    mpz_class word;
    std::uint64_t w = NextU64();
    mpz_import(word.get_mpz_t(), 1, 1, sizeof(w), 0, 0, &w);
    out <<= 64;
    out += word;
  }
  std::size_t excess = words * 64 - bits;
  if (excess > 0) out >>= excess;
  return out;
}

mpz_class RandomSource::Below(const mpz_class& bound) {
  if (bound <= 0) throw Error(ErrorCode::kInvalidArgument, "empty range");
  if (bound == 1) return 0;
  mpz_class top = bound - 1;
  std::size_t bits = mpz_sizeinbase(top.get_mpz_t(), 2);
  mpz_class x;
  do {
    x = Bits(bits);
  } while (x >= bound);
  return x;
}

mpz_class RandomSource::InRange(const mpz_class& lo, const mpz_class& hi) {
  if (lo >= hi) throw Error(ErrorCode::kInvalidArgument, "empty range");
  return lo + Below(hi - lo);
}

RandomSource RandomSource::Fork() {
  if (seed_) return RandomSource(NextU64());
  return Cryptographic();
}

}  // namespace helb
