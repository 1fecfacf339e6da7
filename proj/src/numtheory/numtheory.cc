#include "helb/numtheory.h"

#include <algorithm>
#include <array>

#include "helb/error.h"

namespace helb {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNotInvertible: return "NotInvertible";
    case ErrorCode::kInvalidModulus: return "InvalidModulus";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kInvalidOptions: return "InvalidOptions";
    case ErrorCode::kMessageOutOfRange: return "MessageOutOfRange";
    case ErrorCode::kDecryptionFailure: return "DecryptionFailure";
    case ErrorCode::kCapabilityUnsupported: return "CapabilityUnsupported";
    case ErrorCode::kWidthMismatch: return "WidthMismatch";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kParamMismatch: return "ParamMismatch";
    case ErrorCode::kTooManyValues: return "TooManyValues";
    case ErrorCode::kInvalidAddress: return "InvalidAddress";
    case ErrorCode::kInvalidPrefix: return "InvalidPrefix";
    case ErrorCode::kSchemeMismatch: return "SchemeMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kFormat: return "Format";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace {

// Primes below 2000, used for trial division before Miller-Rabin.
const std::vector<unsigned>& SmallPrimes() {
  static const std::vector<unsigned> primes = [] {
    constexpr unsigned kLimit = 2000;
    std::vector<bool> composite(kLimit, false);
    std::vector<unsigned> out;
    for (unsigned i = 2; i < kLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (unsigned j = i * i; j < kLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

// One Miller-Rabin round; n odd > 3, n - 1 = d * 2^s.
bool MillerRabinRound(const BigUint& n, const BigUint& n_minus_1,
                      const BigUint& d, unsigned long s, const BigUint& base) {
  BigUint x = PowMod(base, d, n);
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

std::uint64_t HashMagnitude(const BigUint& n) {
  // FNV-1a over the limbs.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::size_t limbs = mpz_size(n.get_mpz_t());
  for (std::size_t i = 0; i < limbs; ++i) {
    std::uint64_t limb = mpz_getlimbn(n.get_mpz_t(), i);
    for (int b = 0; b < 8; ++b) {
      h ^= (limb >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace

std::size_t BitLength(const BigUint& n) {
  if (n == 0) return 0;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

BigUint PowMod(const BigUint& base, const BigUint& exp, const BigUint& mod) {
  if (mod <= 0) throw Error(ErrorCode::kInvalidModulus, "modulus must be > 0");
  BigUint out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(),
           mod.get_mpz_t());
  return out;
}

bool IsProbablePrime(const BigUint& n, int rounds) {
  if (n < 2) return false;
  for (unsigned p : SmallPrimes()) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  const BigUint n_minus_1 = n - 1;
  const unsigned long s = mpz_scan1(n_minus_1.get_mpz_t(), 0);
  BigUint d;
  mpz_tdiv_q_2exp(d.get_mpz_t(), n_minus_1.get_mpz_t(), s);

  // Deterministic for n < 3,317,044,064,679,887,385,961,981.
  static const BigUint kDeterministicLimit("3317044064679887385961981");
  static constexpr std::array<unsigned, 13> kBases = {2,  3,  5,  7,  11, 13, 17,
                                                      19, 23, 29, 31, 37, 41};
  if (n < kDeterministicLimit) {
    for (unsigned b : kBases) {
      if (!MillerRabinRound(n, n_minus_1, d, s, b)) return false;
    }
    return true;
  }
  RandomSource witnesses = RandomSource::Seeded(HashMagnitude(n));
  const BigUint upper = n - 2;
  for (int i = 0; i < rounds; ++i) {
    BigUint base = witnesses.InRange(2, upper);
    if (!MillerRabinRound(n, n_minus_1, d, s, base)) return false;
  }
  return true;
}

BigUint GenPrime(std::size_t bits, RandomSource& rng) {
  if (bits < 8) {
    throw Error(ErrorCode::kInvalidArgument, "prime size must be >= 8 bits");
  }
  BigUint top = 1;
  top <<= bits - 1;
  for (;;) {
    BigUint candidate = rng.Bits(bits - 1) | top;
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (IsProbablePrime(candidate)) return candidate;
  }
}

BigUint NextPrime(const BigUint& n) {
  BigUint c = n + 1;
  if (c <= 2) return 2;
  if (mpz_even_p(c.get_mpz_t())) ++c;
  while (!IsProbablePrime(c)) c += 2;
  return c;
}

BigUint Gcd(const BigUint& a, const BigUint& b) {
  BigUint out;
  mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

BigUint Lcm(const BigUint& a, const BigUint& b) {
  if (a == 0 || b == 0) return 0;
  return a / Gcd(a, b) * b;
}

BigUint ModInv(const BigUint& a, const BigUint& m) {
  if (m < 2) throw Error(ErrorCode::kInvalidModulus, "modulus must be >= 2");
  // Extended Euclid on (a mod m, m), tracking only the coefficient of a.
  BigUint old_r = a % m, r = m;
  BigUint old_s = 1, s = 0;
  while (r != 0) {
    BigUint quotient = old_r / r;
    BigUint tmp = old_r - quotient * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quotient * s;
    old_s = s;
    s = tmp;
  }
  // old_r is now gcd(a, m) and old_s its coefficient.
  if (old_r != 1) {
    throw Error(ErrorCode::kNotInvertible,
                "no inverse: gcd(a, m) = " + old_r.get_str());
  }
  BigUint x = old_s % m;
  if (x < 0) x += m;
  return x;
}

int Jacobi(const BigUint& a_in, const BigUint& n_in) {
  if (n_in < 3 || mpz_even_p(n_in.get_mpz_t())) {
    throw Error(ErrorCode::kInvalidModulus,
                "Jacobi symbol needs an odd modulus >= 3");
  }
  BigUint a = a_in % n_in;
  BigUint n = n_in;
  int result = 1;
  while (a != 0) {
    unsigned long twos = mpz_scan1(a.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(a.get_mpz_t(), a.get_mpz_t(), twos);
    unsigned long n_mod_8 = mpz_fdiv_ui(n.get_mpz_t(), 8);
    if ((twos & 1) && (n_mod_8 == 3 || n_mod_8 == 5)) result = -result;
    std::swap(a, n);
    if (mpz_fdiv_ui(a.get_mpz_t(), 4) == 3 &&
        mpz_fdiv_ui(n.get_mpz_t(), 4) == 3) {
      result = -result;
    }
    a %= n;
  }
  return n == 1 ? result : 0;
}

std::vector<BigUint> FirstPrimes(std::size_t count) {
  if (count == 0) throw Error(ErrorCode::kInvalidArgument, "count must be >= 1");
  std::vector<BigUint> out;
  out.reserve(count);
  for (unsigned p : SmallPrimes()) {
    if (out.size() == count) return out;
    out.emplace_back(p);
  }
  BigUint next = out.back();
  while (out.size() < count) {
    next = NextPrime(next);
    out.push_back(next);
  }
  return out;
}

std::uint64_t BruteForceDlog(const BigUint& base, const BigUint& target,
                             const BigUint& modulus, std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "bound must be >= 1");
  if (modulus < 1) throw Error(ErrorCode::kInvalidModulus, "modulus must be >= 1");
  const BigUint want = target % modulus;
  const BigUint step = base % modulus;
  BigUint current = 1 % modulus;
  for (std::uint64_t e = 0; e < bound; ++e) {
    if (current == want) return e;
    current = current * step % modulus;
  }
  throw Error(ErrorCode::kNotFound, "no exponent below bound");
}

std::string ToHex(const BigUint& n) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "negative value");
  return n.get_str(16);
}

BigUint FromHex(std::string_view hex) {
  if (hex.empty()) throw Error(ErrorCode::kFormat, "empty hex value");
  for (char c : hex) {
    bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') ||
              (c >= 'A' && c <= 'F');
    if (!ok) {
      throw Error(ErrorCode::kFormat,
                  "invalid hex digit in '" + std::string(hex) + "'");
    }
  }
  return BigUint(std::string(hex), 16);
}

std::vector<std::uint8_t> ToBytes(const BigUint& n) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "negative value");
  if (n == 0) return {};
  std::size_t count = (mpz_sizeinbase(n.get_mpz_t(), 2) + 7) / 8;
  std::vector<std::uint8_t> out(count);
  std::size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, n.get_mpz_t());
  out.resize(written);
  return out;
}

BigUint FromBytes(std::span<const std::uint8_t> bytes) {
  BigUint out = 0;
  if (!bytes.empty()) {
    mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return out;
}

}  // namespace helb
