#ifndef HELB_BFV_H_
#define HELB_BFV_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "helb/numtheory.h"
#include "helb/random.h"

namespace helb::bfv {

using u128 = unsigned __int128;

// Depth-0 BFV over Z_q[x]/(x^n + 1): encryption, decryption, addition and
// subtraction only. No relinearization, no ciphertext multiplication.
struct BfvParams {
  std::uint32_t ring_dim = 0;
  BigUint plaintext_mod;
  BigUint ciphertext_mod;
  double err_stddev = 0.0;

  friend bool operator==(const BfvParams&, const BfvParams&) = default;
};

// 100-bit prime, 1 mod 2^15, shared by every built-in profile.
BigUint DefaultCiphertextModulus();
// n = 4096, t = 35184372744193, sigma = 3.2.
BfvParams DeskProfile();
// n = 16384 with the same moduli.
BfvParams PaperProfile();
// n = 256. Insecure; small enough for exhaustive protocol tests.
BfvParams TestProfile();

enum class ParamViolation {
  kRingDimNotPowerOfTwo,
  kPlaintextNotPrime,
  kPlaintextNotNttFriendly,  // t != 1 mod 2n
  kCiphertextNotPrime,
  kModulusRatioTooSmall,     // q / t <= 2^20
  kStddevNotPositive,
  kUnsupportedSize,          // outside what this implementation handles
};

struct ParamIssue {
  ParamViolation kind;
  std::string detail;
};

struct ParamReport {
  std::vector<ParamIssue> issues;

  bool ok() const { return issues.empty(); }
  bool Has(ParamViolation kind) const;
  std::string Summary() const;
};

ParamReport ValidateParams(const BfvParams& params);

// Coefficients canonical in [0, modulus): q for key and ciphertext parts, t
// for plaintexts.
struct RingPoly {
  std::vector<u128> coeffs;

  friend bool operator==(const RingPoly&, const RingPoly&) = default;
};

// Ternary secret stored mod q (q - 1 encodes -1).
struct SecretKey {
  RingPoly s;
};

// pk0 = -(a*s + e), pk1 = a.
struct PublicKey {
  RingPoly pk0, pk1;
};

struct KeyPair {
  SecretKey secret;
  PublicKey pub;
};

struct Ciphertext {
  RingPoly c0, c1;
  // Homomorphic operations folded into this ciphertext; not serialized.
  std::uint32_t op_count = 0;
};

class Context {
 public:
  // Throws kInvalidParams carrying ParamReport::Summary().
  static std::shared_ptr<const Context> Create(const BfvParams& params);
  ~Context();
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;

  const BfvParams& params() const;
  std::size_t ring_dim() const;
  std::uint64_t plaintext_modulus() const;
  u128 ciphertext_modulus() const;
  bool uses_ntt() const;

  // Product in Z_q[x]/(x^n + 1).
  RingPoly Multiply(const RingPoly& a, const RingPoly& b) const;

  KeyPair KeyGen(RandomSource& rng) const;

  // value i -> coefficient i, remaining coefficients zero; values reduced
  // mod t. Throws kTooManyValues beyond n values.
  RingPoly Encode(std::span<const std::uint64_t> values) const;
  std::vector<std::uint64_t> Decode(const RingPoly& plaintext) const;
  // Every coefficient set to `value` mod t.
  RingPoly EncodeReplicated(std::uint64_t value) const;

  Ciphertext EncryptSymmetric(const SecretKey& sk, const RingPoly& plaintext,
                              RandomSource& rng) const;

  Ciphertext EvalAdd(const Ciphertext& a, const Ciphertext& b) const;
  Ciphertext EvalSub(const Ciphertext& a, const Ciphertext& b) const;

  // round(q * m / t): the plaintext lifted into the ciphertext ring.
  RingPoly ScalePlaintext(const RingPoly& plaintext) const;

  // Worst-case noise of a fresh public-key encryption with the 6-sigma
  // error cutoff: 6 sigma (2n + 1) + 1.
  u128 FreshNoiseBound() const;
  // Decryption is exact while noise stays below q / (2t) - 1/2.
  u128 NoiseThreshold() const;

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  explicit Context(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

// Public-key encryption with the key pre-transformed for repeated use.
class Encryptor {
 public:
  Encryptor(std::shared_ptr<const Context> context, const PublicKey& pk);

  Ciphertext Encrypt(const RingPoly& plaintext, RandomSource& rng) const;

  const Context& context() const { return *context_; }

 private:
  std::shared_ptr<const Context> context_;
  PublicKey pk_;
  std::vector<u128> pk0_ntt_mont_, pk1_ntt_mont_;
};

class Decryptor {
 public:
  Decryptor(std::shared_ptr<const Context> context, const SecretKey& sk);

  // m = round(t/q * (c0 + c1*s)) mod t, coefficientwise.
  RingPoly Decrypt(const Ciphertext& ct) const;
  // A single plaintext coefficient in O(n), without a full product.
  std::uint64_t DecryptCoefficient(const Ciphertext& ct,
                                   std::size_t index) const;
  // max |c0 + c1*s - round(q*m/t)| over coefficients, centered mod q.
  u128 NoiseMagnitude(const Ciphertext& ct, const RingPoly& expected) const;

  const Context& context() const { return *context_; }

 private:
  RingPoly Phase(const Ciphertext& ct) const;

  std::shared_ptr<const Context> context_;
  std::vector<std::int8_t> s_signed_;
  std::vector<u128> s_ntt_mont_;
};

// Convenience wrappers that build a one-shot Encryptor / Decryptor.
Ciphertext Encrypt(const std::shared_ptr<const Context>& context,
                   const PublicKey& pk, const RingPoly& plaintext,
                   RandomSource& rng);
RingPoly Decrypt(const std::shared_ptr<const Context>& context,
                 const SecretKey& sk, const Ciphertext& ct);

}  // namespace helb::bfv

#endif  // HELB_BFV_H_
