#include "helb/error.h"
#include "schemes.h"

namespace helb::phe::detail {

BigUint BenalohDefaultBlock() {
  BigUint two33 = 1;
  two33 <<= 33;
  static const BigUint block = NextPrime(two33);
  return block;
}

// p = r*k + 1 with gcd(r, k) = 1, q with gcd(r, q - 1) = 1, and y chosen so
// that x = y^(phi/r) != 1 has order r.
BenalohKeys BenalohKeyGen(unsigned bits, const BigUint& r, RandomSource& rng) {
  if (r < 3 || !IsProbablePrime(r)) {
    throw Error(ErrorCode::kInvalidOptions,
                "Benaloh block size must be an odd prime");
  }
  const std::size_t half = bits / 2;
  const std::size_t r_bits = BitLength(r);
  if (half < r_bits + 2 || half < 8) {
    throw Error(ErrorCode::kInvalidOptions,
                "modulus too small for the Benaloh block size");
  }

  BigUint p;
  BigUint top = 1;
  top <<= half - 1;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kKeygenRetries) {
      throw Error(ErrorCode::kInvalidOptions, "no prime p with r | p - 1");
    }
    // k even so that p is odd; k sized so that p has `half` bits.
    BigUint k = rng.InRange(top / r + 1, (top * 2 - 1) / r + 1);
    if (mpz_odd_p(k.get_mpz_t())) k += 1;
    p = r * k + 1;
    if (BitLength(p) != half) continue;
    if (Gcd(r, k) != 1) continue;
    if (IsProbablePrime(p)) break;
  }

  BigUint q;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kKeygenRetries) {
      throw Error(ErrorCode::kInvalidOptions, "no prime q with gcd(r, q-1)=1");
    }
    q = GenPrime(half, rng);
    if (q != p && Gcd(r, q - 1) == 1) break;
  }

  const BigUint n = p * q;
  const BigUint phi_over_r = (p - 1) * (q - 1) / r;
  BenalohKeys keys;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kKeygenRetries) {
      throw Error(ErrorCode::kInvalidOptions, "no suitable y found");
    }
    BigUint y = RandomUnit(n, rng);
    BigUint x = PowMod(y, phi_over_r, n);
    if (x != 1) {
      keys.pub.y = y;
      keys.priv.x = x;
      break;
    }
  }
  keys.pub.r = r;
  keys.pub.n = n;
  keys.priv.p = p;
  keys.priv.q = q;
  return keys;
}

BigUint BenalohEncrypt(const BenalohKeys::Public& pub, const BigUint& m,
                       RandomSource& rng) {
  if (m >= pub.r) throw Error(ErrorCode::kMessageOutOfRange, "m >= r");
  // u must be a unit: a shared factor with n collapses u^r and breaks
  // decryption.
  const BigUint u = RandomUnit(pub.n, rng);
  return PowMod(pub.y, m, pub.n) * PowMod(u, pub.r, pub.n) % pub.n;
}

namespace {

BigUint PhiOverR(const BenalohKeys& keys) {
  return (keys.priv.p - 1) * (keys.priv.q - 1) / keys.pub.r;
}

}  // namespace

BigUint BenalohDecrypt(const BenalohKeys& keys, const BigUint& c) {
  if (keys.pub.r > kBenalohBruteForceLimit) {
    throw Error(ErrorCode::kDecryptionFailure,
                "block size too large for exhaustive decryption; only the "
                "zero test is available");
  }
  const BigUint a = PowMod(c, PhiOverR(keys), keys.pub.n);
  try {
    return BruteForceDlog(keys.priv.x, a, keys.pub.n, keys.pub.r.get_ui());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotFound) throw;
    throw Error(ErrorCode::kDecryptionFailure,
                "ciphertext does not decrypt under this key");
  }
}

bool BenalohIsZero(const BenalohKeys& keys, const BigUint& c) {
  return PowMod(c, PhiOverR(keys), keys.pub.n) == 1;
}

}  // namespace helb::phe::detail
