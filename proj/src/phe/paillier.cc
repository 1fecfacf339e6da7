#include "helb/error.h"
#include "schemes.h"

namespace helb::phe {

namespace {

// L(x) = (x - 1) / n
BigUint L(const BigUint& x, const BigUint& n) { return (x - 1) / n; }

}  // namespace

PaillierKeys PaillierFromPrimes(const BigUint& p, const BigUint& q) {
  if (p == q) throw Error(ErrorCode::kInvalidOptions, "p and q must differ");
  PaillierKeys keys;
  const BigUint n = p * q;
  const BigUint n2 = n * n;
  if (Gcd(n, (p - 1) * (q - 1)) != 1) {
    throw Error(ErrorCode::kInvalidOptions, "gcd(N, phi(N)) != 1");
  }
  keys.pub.n = n;
  keys.pub.g = n + 1;
  keys.priv.lambda = Lcm(p - 1, q - 1);
  keys.priv.mu = ModInv(L(PowMod(keys.pub.g, keys.priv.lambda, n2), n), n);
  return keys;
}

namespace detail {

PaillierKeys PaillierKeyGen(unsigned bits, RandomSource& rng) {
  for (;;) {
    auto [p, q] = DistinctPrimes(bits / 2, rng);
    if (BitLength(p * q) != bits) continue;
    if (Gcd(p * q, (p - 1) * (q - 1)) != 1) continue;
    return PaillierFromPrimes(p, q);
  }
}

BigUint PaillierEncrypt(const PaillierKeys::Public& pub, const BigUint& m,
                        RandomSource& rng) {
  if (m >= pub.n) throw Error(ErrorCode::kMessageOutOfRange, "m >= N");
  const BigUint n2 = pub.n * pub.n;
  const BigUint r = RandomUnit(pub.n, rng);
  return PowMod(pub.g, m, n2) * PowMod(r, pub.n, n2) % n2;
}

BigUint PaillierDecrypt(const PaillierKeys& keys, const BigUint& c) {
  const BigUint& n = keys.pub.n;
  const BigUint n2 = n * n;
  return L(PowMod(c, keys.priv.lambda, n2), n) * keys.priv.mu % n;
}

}  // namespace detail
}  // namespace helb::phe
