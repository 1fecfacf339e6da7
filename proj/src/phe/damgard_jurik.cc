#include <vector>

#include "helb/error.h"
#include "schemes.h"

namespace helb::phe {

namespace {

BigUint Power(const BigUint& base, unsigned e) {
  BigUint out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

// Recovers m from a = (1 + n)^m mod n^(s+1) one base-n digit at a time.
BigUint ExtractExponent(const BigUint& a, const BigUint& n, unsigned s) {
  std::vector<BigUint> n_pow(s + 2);
  n_pow[0] = 1;
  for (unsigned j = 1; j <= s + 1; ++j) n_pow[j] = n_pow[j - 1] * n;

  BigUint i = 0;
  for (unsigned j = 1; j <= s; ++j) {
    const BigUint& nj = n_pow[j];
    BigUint t1 = (a % n_pow[j + 1] - 1) / n;
    BigUint t2 = i;
    BigUint factorial = 1;
    for (unsigned k = 2; k <= j; ++k) {
      i -= 1;
      t2 = t2 * i % nj;
      factorial *= k;
      BigUint term = t2 * n_pow[k - 1] % nj * ModInv(factorial, nj) % nj;
      t1 = t1 - term;
    }
    i = t1 % nj;
    if (i < 0) i += nj;
  }
  return i;
}

}  // namespace

DamgardJurikKeys DamgardJurikFromPrimes(const BigUint& p, const BigUint& q,
                                        unsigned s) {
  if (s < 1 || s > 4) {
    throw Error(ErrorCode::kInvalidOptions, "Damgard-Jurik s must be in 1..4");
  }
  if (p == q) throw Error(ErrorCode::kInvalidOptions, "p and q must differ");
  DamgardJurikKeys keys;
  const BigUint n = p * q;
  if (Gcd(n, (p - 1) * (q - 1)) != 1) {
    throw Error(ErrorCode::kInvalidOptions, "gcd(n, phi(n)) != 1");
  }
  keys.pub.n = n;
  keys.pub.g = n + 1;
  keys.pub.s = s;
  keys.priv.lambda = Lcm(p - 1, q - 1);
  // d = 0 mod lambda, d = 1 mod n^s.
  const BigUint ns = Power(n, s);
  keys.priv.d = keys.priv.lambda * ModInv(keys.priv.lambda, ns);
  return keys;
}

namespace detail {

BigUint DamgardJurikCiphertextModulus(const DamgardJurikKeys::Public& pub) {
  return Power(pub.n, pub.s + 1);
}

BigUint DamgardJurikMessageModulus(const DamgardJurikKeys::Public& pub) {
  return Power(pub.n, pub.s);
}

DamgardJurikKeys DamgardJurikKeyGen(unsigned bits, unsigned s,
                                    RandomSource& rng) {
  for (;;) {
    auto [p, q] = DistinctPrimes(bits / 2, rng);
    if (BitLength(p * q) != bits) continue;
    if (Gcd(p * q, (p - 1) * (q - 1)) != 1) continue;
    return DamgardJurikFromPrimes(p, q, s);
  }
}

BigUint DamgardJurikEncrypt(const DamgardJurikKeys::Public& pub,
                            const BigUint& m, RandomSource& rng) {
  const BigUint ns = DamgardJurikMessageModulus(pub);
  if (m >= ns) throw Error(ErrorCode::kMessageOutOfRange, "m >= n^s");
  const BigUint mod = ns * pub.n;
  const BigUint r = RandomUnit(pub.n, rng);
  return PowMod(pub.g, m, mod) * PowMod(r, ns, mod) % mod;
}

BigUint DamgardJurikDecrypt(const DamgardJurikKeys& keys, const BigUint& c) {
  const BigUint mod = DamgardJurikCiphertextModulus(keys.pub);
  return ExtractExponent(PowMod(c, keys.priv.d, mod), keys.pub.n, keys.pub.s);
}

}  // namespace detail
}  // namespace helb::phe
