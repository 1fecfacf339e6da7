#include <optional>

#include "helb/error.h"
#include "schemes.h"

namespace helb::phe::detail {

namespace {

// Exponents of `value` over the key's small primes, or nullopt if value has
// any other factor.
std::optional<std::vector<unsigned>> SmoothExponents(
    BigUint value, const std::vector<BigUint>& primes) {
  if (value <= 0) return std::nullopt;
  std::vector<unsigned> exps(primes.size(), 0);
  for (std::size_t i = 0; i < primes.size() && value != 1; ++i) {
    while (mpz_divisible_p(value.get_mpz_t(), primes[i].get_mpz_t())) {
      value /= primes[i];
      ++exps[i];
    }
  }
  if (value != 1) return std::nullopt;
  return exps;
}

BigUint Weighted(const std::vector<unsigned>& exps) {
  BigUint out = 0;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] == 0) continue;
    BigUint term = exps[i];
    term <<= i;
    out += term;
  }
  return out;
}

struct Fraction {
  BigUint num, den;
};

// Finds num/den = x (mod p) with 0 < num, den <= sqrt(p/2), if one exists.
std::optional<Fraction> RationalReconstruct(const BigUint& x, const BigUint& p) {
  BigUint bound;
  BigUint half = p / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  BigUint r0 = p, r1 = x % p;
  BigUint t0 = 0, t1 = 1;
  while (r1 > bound) {
    BigUint quotient = r0 / r1;
    BigUint tmp = r0 - quotient * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - quotient * t1;
    t0 = t1;
    t1 = tmp;
  }
  BigUint num = r1, den = t1;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num <= 0 || den == 0 || den > bound) return std::nullopt;
  if ((num - x * den) % p != 0) return std::nullopt;
  return Fraction{num, den};
}

}  // namespace

NaccacheSternKeys NaccacheSternKeyGen(unsigned bits, unsigned message_bits,
                                      RandomSource& rng) {
  if (message_bits < 1) {
    throw Error(ErrorCode::kInvalidOptions, "message width must be >= 1");
  }
  NaccacheSternKeys keys;
  std::vector<BigUint> primes = FirstPrimes(message_bits);
  BigUint sigma = 1;
  for (const auto& pi : primes) sigma *= pi;
  // 2*sigma^2 < p keeps sums and differences of two messages decodable.
  if (BitLength(2 * sigma * sigma) >= bits) {
    throw Error(ErrorCode::kInvalidOptions,
                "prime too small for the Naccache-Stern message width");
  }
  BigUint p = GenPrime(bits, rng);
  const BigUint p_minus_1 = p - 1;
  BigUint s;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kKeygenRetries) {
      throw Error(ErrorCode::kInvalidOptions, "no secret exponent found");
    }
    s = rng.InRange(3, p_minus_1);
    if (Gcd(s, p_minus_1) == 1) break;
  }
  const BigUint s_inv = ModInv(s, p_minus_1);
  keys.pub.p = p;
  keys.pub.sigma = sigma;
  keys.pub.n_bits = message_bits;
  keys.pub.v.reserve(primes.size());
  for (const auto& pi : primes) keys.pub.v.push_back(PowMod(pi, s_inv, p));
  keys.priv.s = s;
  return keys;
}

// Deterministic: the knapsack has no randomizer.
BigUint NaccacheSternEncrypt(const NaccacheSternKeys::Public& pub,
                             const BigUint& m) {
  if (BitLength(m) > pub.n_bits) {
    throw Error(ErrorCode::kMessageOutOfRange, "m >= 2^n_bits");
  }
  BigUint c = 1;
  for (unsigned i = 0; i < pub.n_bits; ++i) {
    if (mpz_tstbit(m.get_mpz_t(), i)) c = c * pub.v[i] % pub.p;
  }
  return c;
}

// c^s mod p is prod p_i^(e_i), possibly as a fraction after subtraction. The
// bit-per-prime gcd rule is the e_i in {0, 1} case of reading off exponents.
BigUint NaccacheSternDecrypt(const NaccacheSternKeys& keys, const BigUint& c) {
  const auto& pub = keys.pub;
  const std::vector<BigUint> primes = FirstPrimes(pub.n_bits);
  BigUint modulus = 1;
  modulus <<= pub.n_bits;
  const BigUint x = PowMod(c, keys.priv.s, pub.p);

  if (auto exps = SmoothExponents(x, primes)) {
    return Weighted(*exps) % modulus;
  }
  if (auto frac = RationalReconstruct(x, pub.p)) {
    auto num = SmoothExponents(frac->num, primes);
    auto den = SmoothExponents(frac->den, primes);
    if (num && den) {
      BigUint diff = Weighted(*num) - Weighted(*den);
      diff %= modulus;
      if (diff < 0) diff += modulus;
      return diff;
    }
  }
  throw Error(ErrorCode::kDecryptionFailure,
              "Naccache-Stern plaintext exceeds decoding capacity");
}

bool NaccacheSternIsZero(const NaccacheSternKeys& keys, const BigUint& c) {
  return PowMod(c, keys.priv.s, keys.pub.p) == 1;
}

}  // namespace helb::phe::detail
