#include "helb/error.h"
#include "schemes.h"

namespace helb::phe::detail {

GoldwasserMicaliKeys GoldwasserMicaliKeyGen(unsigned bits, RandomSource& rng) {
  GoldwasserMicaliKeys keys;
  auto [p, q] = DistinctPrimes(bits / 2, rng);
  const BigUint n = p * q;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kKeygenRetries) {
      throw Error(ErrorCode::kInvalidOptions, "no pseudosquare found");
    }
    BigUint a = rng.InRange(2, n);
    if (Jacobi(a, p) == -1 && Jacobi(a, q) == -1) {
      keys.pub.a = a;
      break;
    }
  }
  keys.pub.n = n;
  keys.priv.p = p;
  keys.priv.q = q;
  return keys;
}

std::vector<BigUint> GoldwasserMicaliEncrypt(
    const GoldwasserMicaliKeys::Public& pub, const BigUint& m, unsigned width,
    RandomSource& rng) {
  if (width == 0) throw Error(ErrorCode::kInvalidArgument, "width must be >= 1");
  if (BitLength(m) > width) {
    throw Error(ErrorCode::kMessageOutOfRange, "m does not fit the bit width");
  }
  std::vector<BigUint> out;
  out.reserve(width);
  for (unsigned i = width; i-- > 0;) {
    BigUint r = RandomUnit(pub.n, rng);
    BigUint c = r * r % pub.n;
    if (mpz_tstbit(m.get_mpz_t(), i)) c = c * pub.a % pub.n;
    out.push_back(std::move(c));
  }
  return out;
}

BigUint GoldwasserMicaliDecrypt(const GoldwasserMicaliKeys& keys,
                                const std::vector<BigUint>& bits) {
  BigUint m = 0;
  for (const auto& c : bits) {
    m <<= 1;
    if (Jacobi(c, keys.priv.p) != 1) m += 1;
  }
  return m;
}

bool GoldwasserMicaliIsZero(const GoldwasserMicaliKeys& keys,
                            const std::vector<BigUint>& bits) {
  for (const auto& c : bits) {
    if (Jacobi(c, keys.priv.p) != 1) return false;
  }
  return true;
}

}  // namespace helb::phe::detail
