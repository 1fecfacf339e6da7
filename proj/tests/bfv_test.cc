#include "helb/bfv.h"

#include <gtest/gtest.h>

#include "bfv/modulus128.h"
#include "bfv/ntt.h"
#include "helb/error.h"
#include "oracles.h"

namespace helb::bfv {
namespace {

const mpz_class kQ("1267650600228229401496702713857");
constexpr std::uint64_t kT = 35184372744193ULL;

std::vector<mpz_class> ToMpz(const RingPoly& p) {
  std::vector<mpz_class> out;
  for (u128 c : p.coeffs) out.push_back(ToBig(c));
  return out;
}

RingPoly RandomPoly(std::size_t n, u128 q, RandomSource& rng) {
  RingPoly p;
  const mpz_class bound = ToBig(q);
  for (std::size_t i = 0; i < n; ++i) p.coeffs.push_back(FromBig(rng.Below(bound)));
  return p;
}

TEST(ModulusTest, DefaultModulusShape) {
  const BigUint q = DefaultCiphertextModulus();
  EXPECT_EQ(q, kQ);
  EXPECT_TRUE(IsProbablePrime(q));
  EXPECT_EQ(BigUint(q % 32768), 1);
  EXPECT_EQ(BitLength(q), 100u);
  EXPECT_TRUE(IsProbablePrime(BigUint(static_cast<unsigned long>(kT))));
  EXPECT_EQ(kT % 32768, 1u);
  EXPECT_GT(BigUint(q / static_cast<unsigned long>(kT)), BigUint(1) << 20);
}

TEST(ModulusTest, MontgomeryAgainstGmp) {
  auto rng = RandomSource::Seeded(1);
  const Modulus128 mod(FromBig(kQ));
  for (int i = 0; i < 5000; ++i) {
    const BigUint a = rng.Below(kQ), b = rng.Below(kQ);
    const u128 x = FromBig(a), y = FromBig(b);
    ASSERT_EQ(ToBig(mod.Mul(x, y)), BigUint(a * b % kQ));
    ASSERT_EQ(ToBig(mod.Add(x, y)), BigUint((a + b) % kQ));
    ASSERT_EQ(ToBig(mod.Sub(x, y)), BigUint(((a - b) % kQ + kQ) % kQ));
  }
  EXPECT_EQ(mod.Mul(FromBig(kQ - 1), FromBig(kQ - 1)), 1);
  EXPECT_EQ(mod.Mul(0, FromBig(kQ - 1)), 0);
  const BigUint e("98765432109876543210");
  const BigUint base("123456789123456789");
  EXPECT_EQ(ToBig(mod.Pow(FromBig(base), FromBig(e))), PowMod(base, e, kQ));
}

TEST(ModulusTest, WideMultiply) {
  auto rng = RandomSource::Seeded(2);
  for (int i = 0; i < 1000; ++i) {
    const BigUint a = rng.Bits(128), b = rng.Bits(128);
    const Wide w = MulWide(FromBig(a), FromBig(b));
    ASSERT_EQ((ToBig(w.hi) << 128) + ToBig(w.lo), BigUint(a * b));
  }
}

class NttTest : public ::testing::TestWithParam<std::size_t> {};

TEST_P(NttTest, MatchesSchoolbookOracle) {
  const std::size_t n = GetParam();
  auto rng = RandomSource::Seeded(n);
  const Modulus128 mod(FromBig(kQ));
  const NttTables ntt(mod, n);
  // psi is a primitive 2n-th root: psi^n = -1.
  EXPECT_EQ(ToBig(mod.Pow(ntt.psi(), n)), BigUint(kQ - 1));
  for (int rep = 0; rep < 3; ++rep) {
    const RingPoly a = RandomPoly(n, mod.value(), rng);
    const RingPoly b = RandomPoly(n, mod.value(), rng);
    auto fa = a.coeffs, fb = b.coeffs;
    ntt.Forward(fa);
    ntt.Forward(fb);
    std::vector<u128> prod(n);
    for (std::size_t i = 0; i < n; ++i) prod[i] = mod.Mul(fa[i], fb[i]);
    ntt.Inverse(prod);
    const auto expect = oracle::NegacyclicMul(ToMpz(a), ToMpz(b), kQ);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_EQ(ToBig(prod[i]), expect[i]) << i;
    }
    auto round_trip = a.coeffs;
    ntt.Forward(round_trip);
    ntt.Inverse(round_trip);
    EXPECT_EQ(round_trip, a.coeffs);
  }
}

INSTANTIATE_TEST_SUITE_P(Sizes, NttTest, ::testing::Values(2, 8, 64, 256));

TEST(NttTest, ContextMultiplyMatchesOracle) {
  auto rng = RandomSource::Seeded(3);
  const auto ctx = Context::Create(TestProfile());
  ASSERT_TRUE(ctx->uses_ntt());
  const RingPoly a = RandomPoly(256, ctx->ciphertext_modulus(), rng);
  const RingPoly b = RandomPoly(256, ctx->ciphertext_modulus(), rng);
  const auto expect = oracle::NegacyclicMul(ToMpz(a), ToMpz(b), kQ);
  EXPECT_EQ(ToMpz(ctx->Multiply(a, b)), expect);
}

TEST(NttTest, XToTheNIsMinusOne) {
  const auto ctx = Context::Create(TestProfile());
  const std::size_t n = ctx->ring_dim();
  RingPoly x{std::vector<u128>(n, 0)};
  x.coeffs[1] = 1;
  RingPoly p{std::vector<u128>(n, 0)};
  p.coeffs[0] = 1;
  for (std::size_t i = 0; i < n; ++i) p = ctx->Multiply(p, x);
  EXPECT_EQ(p.coeffs[0], ctx->ciphertext_modulus() - 1);
  for (std::size_t i = 1; i < n; ++i) EXPECT_EQ(p.coeffs[i], 0) << i;
}

TEST(NttTest, SchoolbookFallbackAgrees) {
  auto rng = RandomSource::Seeded(4);
  // Odd prime that is not 1 mod 2n.
  const BigUint q = NextPrime(BigUint(1) << 90);
  const Modulus128 mod(FromBig(q));
  const RingPoly a = RandomPoly(16, mod.value(), rng);
  const RingPoly b = RandomPoly(16, mod.value(), rng);
  const auto got = NegacyclicMulSchoolbook(mod, a.coeffs, b.coeffs);
  const auto expect = oracle::NegacyclicMul(ToMpz(a), ToMpz(b), q);
  for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(ToBig(got[i]), expect[i]);
}

TEST(ParamsTest, Profiles) {
  for (const auto& p : {DeskProfile(), PaperProfile(), TestProfile()}) {
    EXPECT_TRUE(ValidateParams(p).ok()) << ValidateParams(p).Summary();
    EXPECT_EQ(p.ciphertext_mod, kQ);
  }
  EXPECT_EQ(DeskProfile().ring_dim, 4096u);
  EXPECT_EQ(PaperProfile().ring_dim, 16384u);
  EXPECT_EQ(PaperProfile().plaintext_mod, static_cast<unsigned long>(kT));
  EXPECT_DOUBLE_EQ(DeskProfile().err_stddev, 3.2);
}

TEST(ParamsTest, Violations) {
  BfvParams base = DeskProfile();
  BfvParams p = base;
  p.ring_dim = 1000;
  EXPECT_TRUE(ValidateParams(p).Has(ParamViolation::kRingDimNotPowerOfTwo));
  p = base;
  p.plaintext_mod = 35184372744195ul;  // divisible by 5
  EXPECT_TRUE(ValidateParams(p).Has(ParamViolation::kPlaintextNotPrime));
  p = base;
  p.plaintext_mod = 65537;
  p.ring_dim = 65536;
  EXPECT_TRUE(ValidateParams(p).Has(ParamViolation::kPlaintextNotNttFriendly));
  p = base;
  p.plaintext_mod = 65537;
  EXPECT_TRUE(ValidateParams(p).ok());
  p = base;
  p.ciphertext_mod = kQ + 2;
  EXPECT_TRUE(ValidateParams(p).Has(ParamViolation::kCiphertextNotPrime));
  p = base;
  p.ciphertext_mod = NextPrime(BigUint(1) << 62);
  EXPECT_TRUE(ValidateParams(p).Has(ParamViolation::kModulusRatioTooSmall));
  p = base;
  p.err_stddev = 0;
  EXPECT_TRUE(ValidateParams(p).Has(ParamViolation::kStddevNotPositive));
  try {
    Context::Create(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidParams);
  }
}

class BfvFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    ctx_ = Context::Create(TestProfile());
    auto rng = RandomSource::Seeded(77);
    keys_ = ctx_->KeyGen(rng);
  }
  std::shared_ptr<const Context> ctx_;
  KeyPair keys_;
};

TEST_F(BfvFixture, KeyRelation) {
  // pk0 + pk1*s = -e with |e| <= 6 sigma.
  const auto& s = keys_.secret.s;
  const Modulus128 mod(ctx_->ciphertext_modulus());
  for (u128 c : s.coeffs) {
    EXPECT_TRUE(c == 0 || c == 1 || c == mod.value() - 1);
  }
  const RingPoly ps = ctx_->Multiply(keys_.pub.pk1, s);
  for (std::size_t i = 0; i < ps.coeffs.size(); ++i) {
    const i128 e = mod.Centered(mod.Add(keys_.pub.pk0.coeffs[i], ps.coeffs[i]));
    EXPECT_LE(e < 0 ? -e : e, 19) << i;
  }
}

TEST_F(BfvFixture, RoundTrip) {
  auto rng = RandomSource::Seeded(5);
  Encryptor enc(ctx_, keys_.pub);
  Decryptor dec(ctx_, keys_.secret);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::uint64_t> vals(256);
    for (auto& v : vals) v = rng.UniformU64(kT);
    vals[0] = rep == 0 ? kT - 1 : vals[0];
    const RingPoly m = ctx_->Encode(vals);
    const Ciphertext ct = enc.Encrypt(m, rng);
    EXPECT_EQ(ctx_->Decode(dec.Decrypt(ct)), vals);
    for (std::size_t i : {0, 1, 100, 255}) {
      EXPECT_EQ(dec.DecryptCoefficient(ct, i), vals[i]);
    }
    EXPECT_LE(dec.NoiseMagnitude(ct, m), ctx_->FreshNoiseBound());
  }
}

TEST_F(BfvFixture, SymmetricEncryption) {
  auto rng = RandomSource::Seeded(6);
  Decryptor dec(ctx_, keys_.secret);
  const std::uint64_t v = 0xC0A80001u;
  const RingPoly m = ctx_->Encode({&v, 1});
  const Ciphertext ct = ctx_->EncryptSymmetric(keys_.secret, m, rng);
  EXPECT_EQ(dec.Decrypt(ct), m);
}

TEST_F(BfvFixture, AddSubWrapAround) {
  auto rng = RandomSource::Seeded(7);
  Encryptor enc(ctx_, keys_.pub);
  Decryptor dec(ctx_, keys_.secret);
  std::vector<std::uint64_t> a(256), b(256);
  for (std::size_t i = 0; i < 256; ++i) {
    a[i] = rng.UniformU64(kT);
    b[i] = rng.UniformU64(kT);
  }
  a[0] = 3;
  b[0] = 7;
  const auto ca = enc.Encrypt(ctx_->Encode(a), rng);
  const auto cb = enc.Encrypt(ctx_->Encode(b), rng);
  const auto diff = ctx_->Decode(dec.Decrypt(ctx_->EvalSub(ca, cb)));
  const auto sum = ctx_->Decode(dec.Decrypt(ctx_->EvalAdd(ca, cb)));
  for (std::size_t i = 0; i < 256; ++i) {
    EXPECT_EQ(diff[i], (a[i] + kT - b[i]) % kT);
    EXPECT_EQ(sum[i], (a[i] + b[i]) % kT);
  }
  EXPECT_EQ(diff[0], kT - 4);
  EXPECT_EQ(ctx_->EvalSub(ca, cb).op_count, 1u);
}

TEST_F(BfvFixture, NoiseGrowsLinearlyWithAdditions) {
  auto rng = RandomSource::Seeded(8);
  Encryptor enc(ctx_, keys_.pub);
  Decryptor dec(ctx_, keys_.secret);
  const std::uint64_t one = 1;
  Ciphertext acc = enc.Encrypt(ctx_->Encode({&one, 1}), rng);
  for (std::uint64_t k = 2; k <= 100; ++k) {
    acc = ctx_->EvalAdd(acc, enc.Encrypt(ctx_->Encode({&one, 1}), rng));
    const RingPoly expect = ctx_->Encode({&k, 1});
    ASSERT_LE(dec.NoiseMagnitude(acc, expect), k * ctx_->FreshNoiseBound());
    ASSERT_EQ(dec.Decrypt(acc), expect);
  }
  EXPECT_EQ(acc.op_count, 99u);
  EXPECT_LT(100 * ctx_->FreshNoiseBound(), ctx_->NoiseThreshold());
}

TEST_F(BfvFixture, ScalingIsExactRounding) {
  const std::uint64_t v = kT - 1;
  const RingPoly scaled = ctx_->ScalePlaintext(ctx_->Encode({&v, 1}));
  // round(q * m / t), computed independently.
  const mpz_class num = kQ * static_cast<unsigned long>(v);
  const mpz_class t = static_cast<unsigned long>(kT);
  const mpz_class expect = (2 * num + t) / (2 * t);
  EXPECT_EQ(ToBig(scaled.coeffs[0]), expect);
  EXPECT_EQ(scaled.coeffs[1], 0);
  EXPECT_EQ(ToBig(ctx_->NoiseThreshold()), BigUint(kQ / (2 * t)));
  EXPECT_EQ(ctx_->FreshNoiseBound(), static_cast<u128>(19 * (2 * 256 + 1) + 1));
}

TEST_F(BfvFixture, EncodingLimitsAndReplication) {
  std::vector<std::uint64_t> too_many(257, 1);
  try {
    ctx_->Encode(too_many);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooManyValues);
  }
  const RingPoly r = ctx_->EncodeReplicated(42);
  for (u128 c : r.coeffs) EXPECT_EQ(c, 42);
  const std::uint64_t big = kT + 5;
  EXPECT_EQ(ctx_->Encode({&big, 1}).coeffs[0], 5);
}

TEST_F(BfvFixture, MismatchedShapesRejected) {
  auto rng = RandomSource::Seeded(9);
  const auto other = Context::Create(DeskProfile());
  const auto other_keys = other->KeyGen(rng);
  const std::uint64_t v = 1;
  const auto ct = Encrypt(other, other_keys.pub, other->Encode({&v, 1}), rng);
  try {
    Decrypt(ctx_, keys_.secret, ct);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParamMismatch);
  }
}

TEST(BfvSeedTest, SeededRunsAreReproducible) {
  const auto ctx = Context::Create(TestProfile());
  auto a = RandomSource::Seeded(11);
  auto b = RandomSource::Seeded(11);
  const auto ka = ctx->KeyGen(a);
  const auto kb = ctx->KeyGen(b);
  EXPECT_EQ(ka.secret.s, kb.secret.s);
  EXPECT_EQ(ka.pub.pk0, kb.pub.pk0);
  const std::uint64_t v = 9;
  const auto ca = Encrypt(ctx, ka.pub, ctx->Encode({&v, 1}), a);
  const auto cb = Encrypt(ctx, kb.pub, ctx->Encode({&v, 1}), b);
  EXPECT_EQ(ca.c0, cb.c0);
  EXPECT_EQ(ca.c1, cb.c1);
  auto c = RandomSource::Seeded(12);
  const auto cc = Encrypt(ctx, ka.pub, ctx->Encode({&v, 1}), c);
  EXPECT_NE(ca.c0, cc.c0);
}

}  // namespace
}  // namespace helb::bfv
