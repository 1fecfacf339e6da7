#include "helb/phe.h"

#include <gtest/gtest.h>

#include <set>

#include "helb/error.h"
#include "oracles.h"
#include "test_keys.h"

namespace helb::phe {
namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

KeyPair PaillierToy() { return PaillierFromPrimes(5, 7); }

TEST(PaillierTest, ToyKeyValues) {
  const auto keys = PaillierFromPrimes(5, 7);
  EXPECT_EQ(keys.pub.n, 35);
  EXPECT_EQ(keys.pub.g, 36);
  EXPECT_EQ(keys.priv.lambda, 12);
  // mu * L(g^lambda mod N^2) = 1 mod N
  const BigUint u = PowMod(36, 12, 35 * 35);
  EXPECT_EQ(BigUint(((u - 1) / 35) * keys.priv.mu % 35), 1);
}

TEST(PaillierTest, ToyArithmetic) {
  auto rng = RandomSource::Seeded(1);
  const KeyPair keys = PaillierToy();
  const PublicKey pub = PublicPart(keys);
  auto enc = [&](int m) { return Encrypt(pub, m, rng); };
  EXPECT_EQ(Decrypt(keys, enc(4)), 4);
  EXPECT_EQ(Decrypt(keys, Add(pub, enc(2), enc(3))), 5);
  EXPECT_EQ(Decrypt(keys, Sub(pub, enc(7), enc(3))), 4);
  EXPECT_EQ(Decrypt(keys, Sub(pub, enc(3), enc(7))), 31);
  EXPECT_EQ(Decrypt(keys, ScalarMul(pub, enc(4), 3)), 12);
  EXPECT_EQ(Decrypt(keys, ScalarMul(pub, enc(4), 1)), 4);
  EXPECT_EQ(Decrypt(keys, ScalarMul(pub, enc(4), 0)), 0);
  EXPECT_EQ(Decrypt(keys, Add(pub, enc(9), enc(0))), 9);
}

TEST(PaillierTest, ExhaustiveToyRoundTrip) {
  auto rng = RandomSource::Seeded(2);
  const KeyPair keys = PaillierToy();
  const PublicKey pub = PublicPart(keys);
  for (int m = 0; m < 35; ++m) EXPECT_EQ(Decrypt(keys, Encrypt(pub, m, rng)), m);
  EXPECT_EQ(CodeOf([&] { Encrypt(pub, 35, rng); }),
            ErrorCode::kMessageOutOfRange);
}

class AllSchemes : public ::testing::TestWithParam<SchemeId> {};

TEST_P(AllSchemes, RoundTripRandomMessages) {
  auto rng = RandomSource::Seeded(10 + static_cast<int>(GetParam()));
  const KeyPair keys = testing_keys::Make(GetParam(), 512, rng);
  const PublicKey pub = PublicPart(keys);
  const BigUint bound = MessageBound(pub);
  EXPECT_EQ(Decrypt(keys, Encrypt(pub, 0, rng)), 0);
  for (int i = 0; i < 200; ++i) {
    const BigUint m = rng.Below(bound);
    ASSERT_EQ(Decrypt(keys, Encrypt(pub, m, rng)), m);
  }
}

TEST_P(AllSchemes, ZeroTestMatchesDecrypt) {
  auto rng = RandomSource::Seeded(20 + static_cast<int>(GetParam()));
  const KeyPair keys = testing_keys::Make(GetParam(), 512, rng);
  const PublicKey pub = PublicPart(keys);
  const BigUint bound = MessageBound(pub);
  const bool additive = IsAdditive(GetParam());
  for (int i = 0; i < 50; ++i) {
    const BigUint m1 = rng.Below(bound);
    const BigUint m2 = i % 3 == 0 ? m1 : rng.Below(bound);
    const auto c1 = Encrypt(pub, m1, rng);
    const auto c2 = Encrypt(pub, m2, rng);
    const auto d = additive ? Sub(pub, c1, c2) : Xor(pub, c1, c2);
    EXPECT_EQ(IsZero(keys, d), m1 == m2);
  }
}

TEST_P(AllSchemes, EncryptionIsProbabilistic) {
  if (GetParam() == SchemeId::kNaccacheStern) {
    GTEST_SKIP() << "knapsack Naccache-Stern encryption is deterministic";
  }
  auto rng = RandomSource::Seeded(30 + static_cast<int>(GetParam()));
  const KeyPair keys = testing_keys::Make(GetParam(), 512, rng);
  const PublicKey pub = PublicPart(keys);
  std::set<std::vector<BigUint>> seen;
  std::set<BigUint> gm_bits;
  for (int i = 0; i < 100; ++i) {
    const auto a = Encrypt(pub, 5, rng);
    const auto b = Encrypt(pub, 5, rng);
    EXPECT_NE(a, b);
    seen.insert(a.payload);
    for (const auto& bit : a.payload) gm_bits.insert(bit);
  }
  EXPECT_EQ(seen.size(), 100u);
  if (GetParam() == SchemeId::kGoldwasserMicali) {
    EXPECT_EQ(gm_bits.size(), 100u * kGmDefaultWidth);
  }
}

TEST_P(AllSchemes, SchemeTags) {
  const SchemeId id = GetParam();
  EXPECT_EQ(ParseSchemeName(SchemeName(id)), id);
  auto rng = RandomSource::Seeded(40);
  const KeyPair keys = testing_keys::Make(id, 512, rng);
  EXPECT_EQ(SchemeOf(keys), id);
  EXPECT_EQ(SchemeOf(PublicPart(keys)), id);
  EXPECT_EQ(Encrypt(PublicPart(keys), 1, rng).scheme, id);
}

INSTANTIATE_TEST_SUITE_P(Phe, AllSchemes, ::testing::ValuesIn(kAllSchemes),
                         [](const auto& info) {
                           std::string name(SchemeName(info.param));
                           std::erase(name, '-');
                           return name;
                         });

class Additive : public ::testing::TestWithParam<SchemeId> {};

TEST_P(Additive, HomomorphicIdentities) {
  auto rng = RandomSource::Seeded(50 + static_cast<int>(GetParam()));
  const KeyPair keys = testing_keys::Make(GetParam(), 512, rng);
  const PublicKey pub = PublicPart(keys);
  const BigUint bound = MessageBound(pub);
  const BigUint M = *MessageModulus(keys);
  auto mod = [&](BigUint v) {
    v %= M;
    if (v < 0) v += M;
    return v;
  };
  const bool ns = GetParam() == SchemeId::kNaccacheStern;
  for (int i = 0; i < 100; ++i) {
    const BigUint m1 = rng.Below(bound), m2 = rng.Below(bound);
    const auto c1 = Encrypt(pub, m1, rng), c2 = Encrypt(pub, m2, rng);
    ASSERT_EQ(Decrypt(keys, Add(pub, c1, c2)), mod(m1 + m2));
    ASSERT_EQ(Decrypt(keys, Sub(pub, c1, c2)), mod(m1 - m2));
    // Naccache-Stern exponents overflow for k > 2 at this size.
    const BigUint k = ns ? BigUint(rng.UniformU64(3)) : rng.Below(M);
    ASSERT_EQ(Decrypt(keys, ScalarMul(pub, c1, k)), mod(k * m1));
  }
}

TEST_P(Additive, BlindingKeepsZeroAndNonZero) {
  auto rng = RandomSource::Seeded(60 + static_cast<int>(GetParam()));
  const KeyPair keys = testing_keys::Make(GetParam(), 512, rng);
  const PublicKey pub = PublicPart(keys);
  const auto a = Encrypt(pub, 77, rng);
  const auto b = Encrypt(pub, 76, rng);
  for (int i = 0; i < 20; ++i) {
    EXPECT_TRUE(IsZero(keys, Blind(pub, Sub(pub, a, a), rng)));
    EXPECT_FALSE(IsZero(keys, Blind(pub, Sub(pub, a, b), rng)));
  }
}

TEST_P(Additive, XorUnsupported) {
  auto rng = RandomSource::Seeded(70);
  const KeyPair keys = testing_keys::Make(GetParam(), 512, rng);
  const PublicKey pub = PublicPart(keys);
  const auto c = Encrypt(pub, 1, rng);
  EXPECT_EQ(CodeOf([&] { Xor(pub, c, c); }),
            ErrorCode::kCapabilityUnsupported);
}

INSTANTIATE_TEST_SUITE_P(Phe, Additive,
                         ::testing::Values(SchemeId::kPaillier,
                                           SchemeId::kDamgardJurik,
                                           SchemeId::kOkamotoUchiyama,
                                           SchemeId::kBenaloh,
                                           SchemeId::kNaccacheStern),
                         [](const auto& info) {
                           std::string name(SchemeName(info.param));
                           std::erase(name, '-');
                           return name;
                         });

TEST(DamgardJurikTest, HigherExponents) {
  auto rng = RandomSource::Seeded(80);
  for (unsigned s = 1; s <= 4; ++s) {
    KeygenOptions opts;
    opts.test_mode = true;
    opts.dj_s = s;
    const KeyPair keys = KeyGen(SchemeId::kDamgardJurik, 128, opts, rng);
    const PublicKey pub = PublicPart(keys);
    const auto& k = std::get<DamgardJurikKeys>(keys);
    BigUint ns = 1;
    for (unsigned i = 0; i < s; ++i) ns *= k.pub.n;
    EXPECT_EQ(*MessageModulus(pub), ns);
    for (int i = 0; i < 20; ++i) {
      const BigUint m1 = rng.Below(ns), m2 = rng.Below(ns);
      const auto c1 = Encrypt(pub, m1, rng), c2 = Encrypt(pub, m2, rng);
      ASSERT_EQ(Decrypt(keys, c1), m1) << "s=" << s;
      ASSERT_EQ(Decrypt(keys, Add(pub, c1, c2)), BigUint((m1 + m2) % ns));
    }
  }
  KeygenOptions bad;
  bad.test_mode = true;
  bad.dj_s = 5;
  EXPECT_EQ(CodeOf([&] { KeyGen(SchemeId::kDamgardJurik, 128, bad, rng); }),
            ErrorCode::kInvalidOptions);
}

TEST(DamgardJurikTest, SEqualsOneMatchesPaillier) {
  auto rng = RandomSource::Seeded(81);
  const auto dj = DamgardJurikFromPrimes(1000003, 1000033, 1);
  const auto pa = PaillierFromPrimes(1000003, 1000033);
  EXPECT_EQ(dj.pub.n, pa.pub.n);
  const BigUint m = 123456789;
  const auto c = Encrypt(PublicKey(pa.pub), m, rng);
  // Same group and same g = n + 1, so ciphertexts are interchangeable.
  Ciphertext as_dj{SchemeId::kDamgardJurik, c.payload};
  EXPECT_EQ(Decrypt(KeyPair(dj), as_dj), m);
}

TEST(OkamotoUchiyamaTest, KeyInvariants) {
  auto rng = RandomSource::Seeded(90);
  const KeyPair keys = testing_keys::Make(SchemeId::kOkamotoUchiyama, 512, rng);
  const auto& k = std::get<OkamotoUchiyamaKeys>(keys);
  EXPECT_EQ(k.pub.n, k.priv.p * k.priv.p * k.priv.q);
  const BigUint p2 = k.priv.p * k.priv.p;
  EXPECT_NE(PowMod(k.pub.g, k.priv.p - 1, p2), 1);
  EXPECT_EQ(k.pub.h, PowMod(k.pub.g, k.pub.n, k.pub.n));
  const BigUint bound = MessageBound(PublicPart(keys));
  EXPECT_LT(bound, k.priv.p);
  EXPECT_GE(BitLength(k.priv.p), 40u);
  EXPECT_GT(bound, BigUint(1) << 32);
}

TEST(OkamotoUchiyamaTest, SmallTestKeysStillFitAddresses) {
  auto rng = RandomSource::Seeded(91);
  const KeyPair keys = testing_keys::Make(SchemeId::kOkamotoUchiyama, 16, rng);
  const PublicKey pub = PublicPart(keys);
  const BigUint ip = 0xFFFFFFFFu;
  EXPECT_EQ(Decrypt(keys, Encrypt(pub, ip, rng)), ip);
}

TEST(BenalohTest, KeyInvariants) {
  auto rng = RandomSource::Seeded(100);
  const KeyPair keys = testing_keys::Make(SchemeId::kBenaloh, 512, rng);
  const auto& k = std::get<BenalohKeys>(keys);
  const BigUint r = k.pub.r;
  EXPECT_EQ(k.pub.n, k.priv.p * k.priv.q);
  EXPECT_EQ(BigUint((k.priv.p - 1) % r), 0);
  EXPECT_EQ(Gcd(r, (k.priv.p - 1) / r), 1);
  EXPECT_EQ(Gcd(r, k.priv.q - 1), 1);
  const BigUint phi = (k.priv.p - 1) * (k.priv.q - 1);
  EXPECT_EQ(k.priv.x, PowMod(k.pub.y, phi / r, k.pub.n));
  EXPECT_NE(k.priv.x, 1);
}

TEST(BenalohTest, DefaultBlockExceedsThirtyTwoBits) {
  auto rng = RandomSource::Seeded(101);
  const KeyPair keys = testing_keys::Make(SchemeId::kBenaloh, 512, rng, false);
  const auto& k = std::get<BenalohKeys>(keys);
  EXPECT_GT(k.pub.r, BigUint(1) << 33);
  EXPECT_EQ(k.pub.r, NextPrime(BigUint(1) << 33));
  const PublicKey pub = PublicPart(keys);
  const auto a = Encrypt(pub, 0xC0A80001u, rng);
  const auto b = Encrypt(pub, 0x0A000000u, rng);
  EXPECT_TRUE(IsZero(keys, Sub(pub, a, a)));
  EXPECT_FALSE(IsZero(keys, Sub(pub, a, b)));
  // The block is too large for the linear dlog.
  EXPECT_EQ(CodeOf([&] { Decrypt(keys, a); }), ErrorCode::kDecryptionFailure);
}

TEST(BenalohTest, ZeroTestAgreesWithDecryptExhaustively) {
  auto rng = RandomSource::Seeded(102);
  KeygenOptions opts;
  opts.test_mode = true;
  opts.benaloh_block = BigUint(17);
  const KeyPair keys = KeyGen(SchemeId::kBenaloh, 64, opts, rng);
  const PublicKey pub = PublicPart(keys);
  for (int m = 0; m < 17; ++m) {
    const auto c = Encrypt(pub, m, rng);
    EXPECT_EQ(Decrypt(keys, c), m);
    EXPECT_EQ(IsZero(keys, c), m == 0);
  }
  opts.benaloh_block = BigUint(16);
  EXPECT_EQ(CodeOf([&] { KeyGen(SchemeId::kBenaloh, 64, opts, rng); }),
            ErrorCode::kInvalidOptions);
}

TEST(NaccacheSternTest, KeyInvariants) {
  auto rng = RandomSource::Seeded(110);
  const KeyPair keys = testing_keys::Make(SchemeId::kNaccacheStern, 512, rng);
  const auto& k = std::get<NaccacheSternKeys>(keys);
  ASSERT_EQ(k.pub.n_bits, 33u);
  const auto primes = FirstPrimes(33);
  BigUint sigma = 1;
  for (const auto& p : primes) sigma *= p;
  EXPECT_EQ(k.pub.sigma, sigma);
  EXPECT_LT(sigma, k.pub.p);
  EXPECT_EQ(Gcd(k.priv.s, k.pub.p - 1), 1);
  for (unsigned i = 0; i < 33; ++i) {
    EXPECT_EQ(PowMod(k.pub.v[i], k.priv.s, k.pub.p), primes[i]);
  }
}

TEST(NaccacheSternTest, ToyExhaustive) {
  auto rng = RandomSource::Seeded(111);
  KeygenOptions opts;
  opts.test_mode = true;
  opts.ns_message_bits = 4;
  const KeyPair keys = KeyGen(SchemeId::kNaccacheStern, 32, opts, rng);
  const PublicKey pub = PublicPart(keys);
  EXPECT_GT(std::get<NaccacheSternKeys>(keys).pub.p, 2 * 3 * 5 * 7);
  for (int m = 0; m < 16; ++m) {
    const auto c = Encrypt(pub, m, rng);
    EXPECT_EQ(Decrypt(keys, c), m);
    EXPECT_EQ(IsZero(keys, c), m == 0);
    for (int m2 = 0; m2 < 16; ++m2) {
      const auto c2 = Encrypt(pub, m2, rng);
      EXPECT_EQ(Decrypt(keys, Sub(pub, c, c2)), (m - m2 + 16) % 16);
      EXPECT_EQ(IsZero(keys, Sub(pub, c, c2)), m == m2);
    }
  }
  EXPECT_EQ(CodeOf([&] { Encrypt(pub, 16, rng); }),
            ErrorCode::kMessageOutOfRange);
}

TEST(GoldwasserMicaliTest, XorExample) {
  auto rng = RandomSource::Seeded(120);
  const KeyPair keys = testing_keys::Make(SchemeId::kGoldwasserMicali, 512, rng);
  const PublicKey pub = PublicPart(keys);
  const auto c17 = Encrypt(pub, 17, rng, 5);
  const auto c16 = Encrypt(pub, 16, rng, 5);
  EXPECT_EQ(c17.payload.size(), 5u);
  EXPECT_EQ(Decrypt(keys, c17), 17);
  EXPECT_EQ(Decrypt(keys, Xor(pub, c17, c16)), 1);
  EXPECT_EQ(Decrypt(keys, Xor(pub, c17, c17)), 0);
  EXPECT_EQ(Decrypt(keys, Xor(pub, c17, Encrypt(pub, 0, rng, 5))), 17);
  EXPECT_EQ(CodeOf([&] { Xor(pub, c17, Encrypt(pub, 1, rng, 6)); }),
            ErrorCode::kWidthMismatch);
  EXPECT_EQ(CodeOf([&] { Add(pub, c17, c16); }),
            ErrorCode::kCapabilityUnsupported);
  EXPECT_EQ(CodeOf([&] { Encrypt(pub, 32, rng, 5); }),
            ErrorCode::kMessageOutOfRange);
}

TEST(GoldwasserMicaliTest, ResidueStructure) {
  auto rng = RandomSource::Seeded(121);
  const KeyPair keys = testing_keys::Make(SchemeId::kGoldwasserMicali, 512, rng);
  const auto& k = std::get<GoldwasserMicaliKeys>(keys);
  EXPECT_EQ(Jacobi(k.pub.a, k.priv.p), -1);
  EXPECT_EQ(Jacobi(k.pub.a, k.priv.q), -1);
  EXPECT_EQ(Jacobi(k.pub.a, k.pub.n), 1);
  // 0b1010...: bits alternate, most significant first.
  const auto ct = Encrypt(PublicPart(keys), 0xAAAAAAAAu, rng);
  ASSERT_EQ(ct.payload.size(), 32u);
  for (std::size_t i = 0; i < 32; ++i) {
    const BigUint& c = ct.payload[i];
    EXPECT_EQ(Jacobi(c, k.pub.n), 1);
    if (i % 2 == 0) {
      EXPECT_EQ(Jacobi(c, k.priv.p), -1);
    } else {
      EXPECT_EQ(Jacobi(c, k.priv.p), 1);
      EXPECT_EQ(Jacobi(c, k.priv.q), 1);
    }
  }
}

TEST(KeygenTest, ModeChecks) {
  auto seeded = RandomSource::Seeded(1);
  auto crypto = RandomSource::Cryptographic();
  KeygenOptions prod;
  EXPECT_EQ(CodeOf([&] { KeyGen(SchemeId::kPaillier, 512, prod, seeded); }),
            ErrorCode::kInvalidOptions);
  EXPECT_EQ(CodeOf([&] { KeyGen(SchemeId::kPaillier, 256, prod, crypto); }),
            ErrorCode::kInvalidOptions);
  KeygenOptions test;
  test.test_mode = true;
  EXPECT_EQ(CodeOf([&] { KeyGen(SchemeId::kPaillier, 8, test, seeded); }),
            ErrorCode::kInvalidOptions);
  const KeyPair k = KeyGen(SchemeId::kPaillier, 512, prod, crypto);
  EXPECT_EQ(BitLength(std::get<PaillierKeys>(k).pub.n), 512u);
}

TEST(KeygenTest, SeededKeysAreReproducible) {
  for (auto id : kAllSchemes) {
    auto a = RandomSource::Seeded(5);
    auto b = RandomSource::Seeded(5);
    // Naccache-Stern needs p > 2 sigma^2, about 352 bits for 33 primes.
    const unsigned bits = id == SchemeId::kNaccacheStern ? 384 : 256;
    const auto ka = testing_keys::Make(id, bits, a);
    const auto kb = testing_keys::Make(id, bits, b);
    auto ra = RandomSource::Seeded(6);
    auto rb = RandomSource::Seeded(6);
    EXPECT_EQ(Encrypt(PublicPart(ka), 3, ra), Encrypt(PublicPart(kb), 3, rb))
        << SchemeName(id);
  }
}

TEST(CiphertextTest, MismatchedSchemeAndMalformedInput) {
  auto rng = RandomSource::Seeded(130);
  const KeyPair pa = testing_keys::Make(SchemeId::kPaillier, 256, rng);
  const KeyPair gm = testing_keys::Make(SchemeId::kGoldwasserMicali, 256, rng);
  const auto c = Encrypt(PublicPart(gm), 1, rng);
  EXPECT_EQ(CodeOf([&] { Decrypt(pa, c); }), ErrorCode::kSchemeMismatch);
  Ciphertext junk{SchemeId::kPaillier, {0}};
  EXPECT_EQ(CodeOf([&] { Decrypt(pa, junk); }), ErrorCode::kDecryptionFailure);
}

}  // namespace
}  // namespace helb::phe
