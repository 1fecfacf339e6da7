#ifndef HELB_NUMTHEORY_H_
#define HELB_NUMTHEORY_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "helb/random.h"

namespace helb {

// Arbitrary-precision nonnegative integer. GMP's mpz_class provides the
// arithmetic; every helb API that produces a BigUint returns a value >= 0 and
// every parser rejects signs.
using BigUint = mpz_class;

inline constexpr int kMillerRabinRounds = 40;

// Odd probable prime with exactly `bits` bits (top bit set). bits >= 8.
BigUint GenPrime(std::size_t bits, RandomSource& rng);

// Miller-Rabin. Below 3.317e24 the first thirteen prime bases give a
// deterministic answer; above it `rounds` pseudo-random bases derived from n
// are used, so the result depends only on (n, rounds).
bool IsProbablePrime(const BigUint& n, int rounds = kMillerRabinRounds);

// Smallest probable prime strictly greater than n.
BigUint NextPrime(const BigUint& n);

// x with a*x = 1 (mod m). Throws kNotInvertible when gcd(a, m) != 1 and
// kInvalidModulus when m < 2.
BigUint ModInv(const BigUint& a, const BigUint& m);

// Jacobi symbol (a/n) for odd n >= 3; throws kInvalidModulus otherwise.
int Jacobi(const BigUint& a, const BigUint& n);

BigUint Gcd(const BigUint& a, const BigUint& b);
BigUint Lcm(const BigUint& a, const BigUint& b);

BigUint PowMod(const BigUint& base, const BigUint& exp, const BigUint& mod);

// First `count` primes in ascending order, starting at 2.
std::vector<BigUint> FirstPrimes(std::size_t count);

// Smallest e in [0, bound) with base^e = target (mod modulus). Linear scan;
// throws kNotFound when no exponent in range works.
std::uint64_t BruteForceDlog(const BigUint& base, const BigUint& target,
                             const BigUint& modulus, std::uint64_t bound);

std::size_t BitLength(const BigUint& n);

// Lowercase hex without prefix; zero is "0".
std::string ToHex(const BigUint& n);
// Accepts [0-9a-fA-F]+ only. Throws kFormat.
BigUint FromHex(std::string_view hex);

// Big-endian magnitude with no leading zero bytes; zero is empty.
std::vector<std::uint8_t> ToBytes(const BigUint& n);
BigUint FromBytes(std::span<const std::uint8_t> bytes);

}  // namespace helb

#endif  // HELB_NUMTHEORY_H_
