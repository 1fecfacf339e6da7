#include <algorithm>

#include "helb/error.h"
#include "schemes.h"

namespace helb::phe::detail {

namespace {

// 32-bit payload differences must fit below 2^(k-1).
constexpr unsigned kMinPrimeBits = 40;

}  // namespace

// p and q have the same length k, so k = ceil(bits(n) / 3) is recoverable
// from the public key alone.
BigUint OkamotoUchiyamaMessageBound(const OkamotoUchiyamaKeys::Public& pub) {
  const std::size_t k = (BitLength(pub.n) + 2) / 3;
  BigUint bound = 1;
  bound <<= k - 1;
  return bound;
}

OkamotoUchiyamaKeys OkamotoUchiyamaKeyGen(unsigned bits, RandomSource& rng) {
  const std::size_t k = std::max<std::size_t>((bits + 2) / 3, kMinPrimeBits);
  OkamotoUchiyamaKeys keys;
  auto [p, q] = DistinctPrimes(k, rng);
  const BigUint p2 = p * p;
  const BigUint n = p2 * q;
  BigUint g;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kKeygenRetries) {
      throw Error(ErrorCode::kInvalidOptions, "no suitable g found");
    }
    g = rng.InRange(2, n);
    if (Gcd(g, n) != 1) continue;
    if (PowMod(g, p - 1, p2) != 1) break;
  }
  keys.pub.n = n;
  keys.pub.g = g;
  keys.pub.h = PowMod(g, n, n);
  keys.priv.p = p;
  keys.priv.q = q;
  return keys;
}

BigUint OkamotoUchiyamaEncrypt(const OkamotoUchiyamaKeys::Public& pub,
                               const BigUint& m, RandomSource& rng) {
  if (m >= OkamotoUchiyamaMessageBound(pub)) {
    throw Error(ErrorCode::kMessageOutOfRange, "m >= 2^(k-1)");
  }
  const BigUint r = rng.InRange(1, pub.n);
  return PowMod(pub.g, m, pub.n) * PowMod(pub.h, r, pub.n) % pub.n;
}

BigUint OkamotoUchiyamaDecrypt(const OkamotoUchiyamaKeys& keys,
                               const BigUint& c) {
  const BigUint& p = keys.priv.p;
  const BigUint p2 = p * p;
  auto L = [&p](const BigUint& x) { return BigUint((x - 1) / p); };
  const BigUint a = L(PowMod(c, p - 1, p2));
  const BigUint b = L(PowMod(keys.pub.g, p - 1, p2));
  return a * ModInv(b, p) % p;
}

}  // namespace helb::phe::detail
