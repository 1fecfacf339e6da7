#include "helb/phe.h"

#include <string>

#include "helb/error.h"
#include "schemes.h"

namespace helb::phe {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

constexpr struct {
  SchemeId id;
  std::string_view name;
  std::string_view label;
} kSchemeTable[] = {
    {SchemeId::kPaillier, "paillier", "Paillier"},
    {SchemeId::kDamgardJurik, "damgard-jurik", "Damgard-Jurik"},
    {SchemeId::kOkamotoUchiyama, "okamoto-uchiyama", "Okamoto-Uchiyama"},
    {SchemeId::kBenaloh, "benaloh", "Benaloh"},
    {SchemeId::kNaccacheStern, "naccache-stern", "Naccache-Stern"},
    {SchemeId::kGoldwasserMicali, "goldwasser-micali", "Goldwasser-Micali"},
};

[[noreturn]] void Unsupported(SchemeId id, std::string_view op) {
  throw Error(ErrorCode::kCapabilityUnsupported,
              std::string(SchemeName(id)) + " does not support " +
                  std::string(op));
}

// Group the ciphertext payload lives in.
BigUint CiphertextModulus(const PublicKey& pub) {
  return std::visit(
      Overloaded{
          [](const PaillierKeys::Public& k) { return BigUint(k.n * k.n); },
          [](const DamgardJurikKeys::Public& k) {
            return detail::DamgardJurikCiphertextModulus(k);
          },
          [](const OkamotoUchiyamaKeys::Public& k) { return k.n; },
          [](const BenalohKeys::Public& k) { return k.n; },
          [](const NaccacheSternKeys::Public& k) { return k.p; },
          [](const GoldwasserMicaliKeys::Public& k) { return k.n; },
      },
      pub);
}

const BigUint& SingleElement(const Ciphertext& ct, const BigUint& modulus) {
  if (ct.payload.size() != 1) {
    throw Error(ErrorCode::kDecryptionFailure, "malformed ciphertext payload");
  }
  const BigUint& c = ct.payload.front();
  if (c <= 0 || c >= modulus) {
    throw Error(ErrorCode::kDecryptionFailure,
                "ciphertext outside the ciphertext group");
  }
  return c;
}

void CheckSameScheme(const PublicKey& pub, const Ciphertext& ct) {
  if (ct.scheme != SchemeOf(pub)) {
    throw Error(ErrorCode::kSchemeMismatch,
                "ciphertext scheme does not match the key");
  }
}

void CheckAdditive(const PublicKey& pub, const Ciphertext& a,
                   const Ciphertext* b, std::string_view op) {
  CheckSameScheme(pub, a);
  if (b) CheckSameScheme(pub, *b);
  if (!IsAdditive(a.scheme)) Unsupported(a.scheme, op);
}

}  // namespace

std::string_view SchemeName(SchemeId id) {
  for (const auto& row : kSchemeTable) {
    if (row.id == id) return row.name;
  }
  return "unknown";
}

std::string_view SchemeLabel(SchemeId id) {
  for (const auto& row : kSchemeTable) {
    if (row.id == id) return row.label;
  }
  return "Unknown";
}

std::optional<SchemeId> ParseSchemeName(std::string_view name) {
  for (const auto& row : kSchemeTable) {
    if (row.name == name) return row.id;
  }
  return std::nullopt;
}

bool IsAdditive(SchemeId id) { return id != SchemeId::kGoldwasserMicali; }
bool SupportsXor(SchemeId id) { return id == SchemeId::kGoldwasserMicali; }

SchemeId SchemeOf(const KeyPair& keys) {
  return static_cast<SchemeId>(keys.index() + 1);
}

SchemeId SchemeOf(const PublicKey& pub) {
  return static_cast<SchemeId>(pub.index() + 1);
}

PublicKey PublicPart(const KeyPair& keys) {
  return std::visit([](const auto& k) -> PublicKey { return k.pub; }, keys);
}

namespace detail {

void CheckKeygenMode(unsigned security_bits, const KeygenOptions& opts,
                     const RandomSource& rng) {
  if (opts.test_mode) {
    if (security_bits < 16) {
      throw Error(ErrorCode::kInvalidOptions,
                  "test-mode keys need at least 16 bits");
    }
    return;
  }
  if (rng.seeded()) {
    throw Error(ErrorCode::kInvalidOptions,
                "refusing to generate keys from a seeded source outside test "
                "mode");
  }
  if (security_bits < 512) {
    throw Error(ErrorCode::kInvalidOptions,
                "keys below 512 bits are only allowed in test mode");
  }
}

std::pair<BigUint, BigUint> DistinctPrimes(std::size_t bits,
                                           RandomSource& rng) {
  BigUint p = GenPrime(bits, rng);
  BigUint q;
  do {
    q = GenPrime(bits, rng);
  } while (q == p);
  return {p, q};
}

BigUint RandomUnit(const BigUint& n, RandomSource& rng) {
  for (;;) {
    BigUint r = rng.InRange(1, n);
    if (Gcd(r, n) == 1) return r;
  }
}

}  // namespace detail

KeyPair KeyGen(SchemeId scheme, unsigned security_bits,
               const KeygenOptions& opts, RandomSource& rng) {
  detail::CheckKeygenMode(security_bits, opts, rng);
  switch (scheme) {
    case SchemeId::kPaillier:
      return detail::PaillierKeyGen(security_bits, rng);
    case SchemeId::kDamgardJurik:
      return detail::DamgardJurikKeyGen(security_bits, opts.dj_s, rng);
    case SchemeId::kOkamotoUchiyama:
      return detail::OkamotoUchiyamaKeyGen(security_bits, rng);
    case SchemeId::kBenaloh:
      return detail::BenalohKeyGen(
          security_bits, opts.benaloh_block.value_or(detail::BenalohDefaultBlock()),
          rng);
    case SchemeId::kNaccacheStern:
      return detail::NaccacheSternKeyGen(security_bits, opts.ns_message_bits,
                                         rng);
    case SchemeId::kGoldwasserMicali:
      return detail::GoldwasserMicaliKeyGen(security_bits, rng);
  }
  throw Error(ErrorCode::kInvalidOptions, "unknown scheme");
}

std::optional<BigUint> MessageModulus(const PublicKey& pub) {
  return std::visit(
      Overloaded{
          [](const PaillierKeys::Public& k) -> std::optional<BigUint> {
            return k.n;
          },
          [](const DamgardJurikKeys::Public& k) -> std::optional<BigUint> {
            return detail::DamgardJurikMessageModulus(k);
          },
          [](const OkamotoUchiyamaKeys::Public&) -> std::optional<BigUint> {
            return std::nullopt;
          },
          [](const BenalohKeys::Public& k) -> std::optional<BigUint> {
            return k.r;
          },
          [](const NaccacheSternKeys::Public& k) -> std::optional<BigUint> {
            BigUint m = 1;
            m <<= k.n_bits;
            return m;
          },
          [](const GoldwasserMicaliKeys::Public&) -> std::optional<BigUint> {
            return std::nullopt;
          },
      },
      pub);
}

std::optional<BigUint> MessageModulus(const KeyPair& keys) {
  if (const auto* ou = std::get_if<OkamotoUchiyamaKeys>(&keys)) {
    return ou->priv.p;
  }
  return MessageModulus(PublicPart(keys));
}

BigUint MessageBound(const PublicKey& pub, unsigned gm_width) {
  if (const auto* ou = std::get_if<OkamotoUchiyamaKeys::Public>(&pub)) {
    return detail::OkamotoUchiyamaMessageBound(*ou);
  }
  if (std::holds_alternative<GoldwasserMicaliKeys::Public>(pub)) {
    BigUint bound = 1;
    bound <<= gm_width;
    return bound;
  }
  return *MessageModulus(pub);
}

Ciphertext Encrypt(const PublicKey& pub, const BigUint& m, RandomSource& rng,
                   unsigned gm_width) {
  if (m < 0) throw Error(ErrorCode::kMessageOutOfRange, "negative message");
  Ciphertext ct{SchemeOf(pub), {}};
  std::visit(
      Overloaded{
          [&](const PaillierKeys::Public& k) {
            ct.payload.push_back(detail::PaillierEncrypt(k, m, rng));
          },
          [&](const DamgardJurikKeys::Public& k) {
            ct.payload.push_back(detail::DamgardJurikEncrypt(k, m, rng));
          },
          [&](const OkamotoUchiyamaKeys::Public& k) {
            ct.payload.push_back(detail::OkamotoUchiyamaEncrypt(k, m, rng));
          },
          [&](const BenalohKeys::Public& k) {
            ct.payload.push_back(detail::BenalohEncrypt(k, m, rng));
          },
          [&](const NaccacheSternKeys::Public& k) {
            ct.payload.push_back(detail::NaccacheSternEncrypt(k, m));
          },
          [&](const GoldwasserMicaliKeys::Public& k) {
            ct.payload = detail::GoldwasserMicaliEncrypt(k, m, gm_width, rng);
          },
      },
      pub);
  return ct;
}

BigUint Decrypt(const KeyPair& keys, const Ciphertext& ct) {
  const PublicKey pub = PublicPart(keys);
  CheckSameScheme(pub, ct);
  const BigUint modulus = CiphertextModulus(pub);
  return std::visit(
      Overloaded{
          [&](const PaillierKeys& k) {
            return detail::PaillierDecrypt(k, SingleElement(ct, modulus));
          },
          [&](const DamgardJurikKeys& k) {
            return detail::DamgardJurikDecrypt(k, SingleElement(ct, modulus));
          },
          [&](const OkamotoUchiyamaKeys& k) {
            return detail::OkamotoUchiyamaDecrypt(k, SingleElement(ct, modulus));
          },
          [&](const BenalohKeys& k) {
            return detail::BenalohDecrypt(k, SingleElement(ct, modulus));
          },
          [&](const NaccacheSternKeys& k) {
            return detail::NaccacheSternDecrypt(k, SingleElement(ct, modulus));
          },
          [&](const GoldwasserMicaliKeys& k) {
            if (ct.payload.empty()) {
              throw Error(ErrorCode::kDecryptionFailure, "empty GM payload");
            }
            return detail::GoldwasserMicaliDecrypt(k, ct.payload);
          },
      },
      keys);
}

Ciphertext Add(const PublicKey& pub, const Ciphertext& a, const Ciphertext& b) {
  CheckAdditive(pub, a, &b, "add");
  const BigUint mod = CiphertextModulus(pub);
  return {a.scheme, {SingleElement(a, mod) * SingleElement(b, mod) % mod}};
}

Ciphertext Sub(const PublicKey& pub, const Ciphertext& a, const Ciphertext& b) {
  CheckAdditive(pub, a, &b, "sub");
  const BigUint mod = CiphertextModulus(pub);
  return {a.scheme,
          {SingleElement(a, mod) * ModInv(SingleElement(b, mod), mod) % mod}};
}

Ciphertext ScalarMul(const PublicKey& pub, const Ciphertext& ct,
                     const BigUint& k) {
  CheckAdditive(pub, ct, nullptr, "scalar_mul");
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "negative scalar");
  const BigUint mod = CiphertextModulus(pub);
  return {ct.scheme, {PowMod(SingleElement(ct, mod), k, mod)}};
}

Ciphertext Xor(const PublicKey& pub, const Ciphertext& a, const Ciphertext& b) {
  CheckSameScheme(pub, a);
  CheckSameScheme(pub, b);
  if (!SupportsXor(a.scheme)) Unsupported(a.scheme, "xor");
  if (a.payload.size() != b.payload.size()) {
    throw Error(ErrorCode::kWidthMismatch, "GM ciphertext widths differ");
  }
  const BigUint& n = std::get<GoldwasserMicaliKeys::Public>(pub).n;
  Ciphertext out{a.scheme, {}};
  out.payload.reserve(a.payload.size());
  for (std::size_t i = 0; i < a.payload.size(); ++i) {
    out.payload.push_back(a.payload[i] * b.payload[i] % n);
  }
  return out;
}

bool IsZero(const KeyPair& keys, const Ciphertext& ct) {
  const PublicKey pub = PublicPart(keys);
  CheckSameScheme(pub, ct);
  const BigUint modulus = CiphertextModulus(pub);
  return std::visit(
      Overloaded{
          [&](const BenalohKeys& k) {
            return detail::BenalohIsZero(k, SingleElement(ct, modulus));
          },
          [&](const NaccacheSternKeys& k) {
            return detail::NaccacheSternIsZero(k, SingleElement(ct, modulus));
          },
          [&](const GoldwasserMicaliKeys& k) {
            if (ct.payload.empty()) {
              throw Error(ErrorCode::kDecryptionFailure, "empty GM payload");
            }
            return detail::GoldwasserMicaliIsZero(k, ct.payload);
          },
          [&](const auto&) { return Decrypt(keys, ct) == 0; },
      },
      keys);
}

Ciphertext Blind(const PublicKey& pub, const Ciphertext& ct,
                 RandomSource& rng) {
  CheckAdditive(pub, ct, nullptr, "blinding");
  const BigUint mod = CiphertextModulus(pub);
  BigUint k;
  if (const auto* ns = std::get_if<NaccacheSternKeys::Public>(&pub)) {
    // Exponent coprime to p - 1 keeps c^s = 1 exactly when it was before.
    k = detail::RandomUnit(ns->p - 1, rng);
  } else if (const auto* ou = std::get_if<OkamotoUchiyamaKeys::Public>(&pub)) {
    // Below 2^(k-1) < p, hence a unit mod the secret prime.
    k = rng.InRange(1, detail::OkamotoUchiyamaMessageBound(*ou));
  } else {
    k = detail::RandomUnit(*MessageModulus(pub), rng);
  }
  return {ct.scheme, {PowMod(SingleElement(ct, mod), k, mod)}};
}

}  // namespace helb::phe
