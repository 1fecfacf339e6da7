#ifndef HELB_PHE_H_
#define HELB_PHE_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "helb/numtheory.h"
#include "helb/random.h"

namespace helb::phe {

enum class SchemeId : std::uint8_t {
  kPaillier = 1,
  kDamgardJurik = 2,
  kOkamotoUchiyama = 3,
  kBenaloh = 4,
  kNaccacheStern = 5,
  kGoldwasserMicali = 6,
};

inline constexpr SchemeId kAllSchemes[] = {
    SchemeId::kPaillier,      SchemeId::kDamgardJurik,
    SchemeId::kOkamotoUchiyama, SchemeId::kBenaloh,
    SchemeId::kNaccacheStern, SchemeId::kGoldwasserMicali,
};

// CLI / key-file name, e.g. "okamoto-uchiyama".
std::string_view SchemeName(SchemeId id);
std::optional<SchemeId> ParseSchemeName(std::string_view name);
// Human label as used in result tables, e.g. "Okamoto-Uchiyama".
std::string_view SchemeLabel(SchemeId id);

// add, sub and scalar_mul.
bool IsAdditive(SchemeId id);
bool SupportsXor(SchemeId id);

struct PaillierKeys {
  struct Public {
    BigUint n, g;
  } pub;
  struct Private {
    BigUint lambda, mu;
  } priv;
};

struct DamgardJurikKeys {
  struct Public {
    BigUint n, g;
    unsigned s = 1;
  } pub;
  struct Private {
    BigUint lambda, d;
  } priv;
};

struct OkamotoUchiyamaKeys {
  struct Public {
    BigUint n, g, h;
  } pub;
  struct Private {
    BigUint p, q;
  } priv;
};

struct BenalohKeys {
  struct Public {
    BigUint y, r, n;
  } pub;
  struct Private {
    BigUint p, q, x;
  } priv;
};

// Multiplicative-knapsack Naccache-Stern. Message bit i selects the i-th
// small prime; `sigma` is the product of the first `n_bits` primes.
struct NaccacheSternKeys {
  struct Public {
    BigUint p;
    std::vector<BigUint> v;
    BigUint sigma;
    unsigned n_bits = 0;
  } pub;
  struct Private {
    BigUint s;
  } priv;
};

struct GoldwasserMicaliKeys {
  struct Public {
    BigUint n, a;
  } pub;
  struct Private {
    BigUint p, q;
  } priv;
};

using KeyPair =
    std::variant<PaillierKeys, DamgardJurikKeys, OkamotoUchiyamaKeys,
                 BenalohKeys, NaccacheSternKeys, GoldwasserMicaliKeys>;
using PublicKey =
    std::variant<PaillierKeys::Public, DamgardJurikKeys::Public,
                 OkamotoUchiyamaKeys::Public, BenalohKeys::Public,
                 NaccacheSternKeys::Public, GoldwasserMicaliKeys::Public>;

SchemeId SchemeOf(const KeyPair& keys);
SchemeId SchemeOf(const PublicKey& pub);
PublicKey PublicPart(const KeyPair& keys);

struct KeygenOptions {
  // Permits seeded RandomSource and moduli below 512 bits.
  bool test_mode = false;
  // Damgard-Jurik exponent, 1..4.
  unsigned dj_s = 1;
  // Benaloh block size r (prime). Unset means the smallest prime > 2^33.
  std::optional<BigUint> benaloh_block;
  // Naccache-Stern: number of small primes = message bits.
  unsigned ns_message_bits = 33;
};

inline constexpr unsigned kGmDefaultWidth = 32;
// Benaloh plaintexts above this block size cannot be recovered by the linear
// dlog scan; only the zero test is offered.
inline constexpr std::uint64_t kBenalohBruteForceLimit = 1ULL << 20;

// For GM the payload holds one element per bit, most significant first. All
// other schemes carry exactly one element.
struct Ciphertext {
  SchemeId scheme;
  std::vector<BigUint> payload;

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

// `security_bits` is the size of the public modulus (N, n, n = p^2 q, or p
// for Naccache-Stern).
KeyPair KeyGen(SchemeId scheme, unsigned security_bits,
               const KeygenOptions& opts, RandomSource& rng);

// Build keys from explicit primes; used for fixed test vectors.
PaillierKeys PaillierFromPrimes(const BigUint& p, const BigUint& q);
DamgardJurikKeys DamgardJurikFromPrimes(const BigUint& p, const BigUint& q,
                                        unsigned s);

// Size of the plaintext group, when it is public: N for Paillier, n^s for
// Damgard-Jurik, r for Benaloh, 2^n_bits for Naccache-Stern. Okamoto-Uchiyama
// reduces mod the secret p, and GM has no additive modulus.
std::optional<BigUint> MessageModulus(const PublicKey& pub);
// Same, but resolves the Okamoto-Uchiyama modulus from the private key.
std::optional<BigUint> MessageModulus(const KeyPair& keys);
// Exclusive upper bound on fresh plaintexts (GM: 2^width).
BigUint MessageBound(const PublicKey& pub, unsigned gm_width = kGmDefaultWidth);

Ciphertext Encrypt(const PublicKey& pub, const BigUint& m, RandomSource& rng,
                   unsigned gm_width = kGmDefaultWidth);
BigUint Decrypt(const KeyPair& keys, const Ciphertext& ct);

Ciphertext Add(const PublicKey& pub, const Ciphertext& a, const Ciphertext& b);
Ciphertext Sub(const PublicKey& pub, const Ciphertext& a, const Ciphertext& b);
Ciphertext ScalarMul(const PublicKey& pub, const Ciphertext& ct,
                     const BigUint& k);
Ciphertext Xor(const PublicKey& pub, const Ciphertext& a, const Ciphertext& b);

// True iff ct decrypts to zero. Benaloh and Naccache-Stern answer without a
// discrete log (c^(phi/r) = 1 mod n, resp. c^s = 1 mod p).
bool IsZero(const KeyPair& keys, const Ciphertext& ct);

// Multiplies the plaintext by a fresh random unit so that decrypting a
// difference no longer reveals it; zero stays zero. Additive schemes only.
Ciphertext Blind(const PublicKey& pub, const Ciphertext& ct, RandomSource& rng);

}  // namespace helb::phe

#endif  // HELB_PHE_H_
