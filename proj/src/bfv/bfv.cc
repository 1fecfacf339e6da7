#include "helb/bfv.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "helb/error.h"
#include "modulus128.h"
#include "ntt.h"

namespace helb::bfv {

struct Context::Impl {
  explicit Impl(const BfvParams& p)
      : params(p),
        n(p.ring_dim),
        t(p.plaintext_mod.get_ui()),
        q(FromBig(p.ciphertext_mod)) {
    const u128 qv = q.value();
    delta = qv / t;
    q_mod_t = static_cast<std::uint64_t>(qv % t);
    error_cutoff = static_cast<std::int64_t>(std::floor(6.0 * p.err_stddev));
    if ((qv - 1) % (2 * static_cast<u128>(n)) == 0) ntt.emplace(q, n);
  }

  // Stored in the Impl so that NttTables' reference to `q` stays valid.
  BfvParams params;
  std::size_t n;
  std::uint64_t t;
  Modulus128 q;
  u128 delta;              // floor(q / t)
  std::uint64_t q_mod_t;   // q mod t
  std::int64_t error_cutoff;
  std::optional<NttTables> ntt;

  u128 Scale(std::uint64_t m) const {
    // round(q*m/t) = delta*m + round((q mod t)*m / t); fits since m < t.
    const u128 frac = (static_cast<u128>(q_mod_t) * m + t / 2) / t;
    return delta * m + frac;
  }

  // round(t*x/q) mod t for x in [0, q).
  std::uint64_t Unscale(u128 x) const {
    const u128 qv = q.value();
    long double estimate = static_cast<long double>(x) *
                           static_cast<long double>(t) /
                           static_cast<long double>(qv);
    u128 quotient = static_cast<u128>(std::floor(estimate + 0.5L));
    // Exact residual t*x - quotient*q; wraps mod 2^128 but its true value is
    // within a few q of zero.
    i128 residual = static_cast<i128>(x * static_cast<u128>(t) - quotient * qv);
    const i128 half = static_cast<i128>(qv >> 1);
    while (residual > half) {
      ++quotient;
      residual -= static_cast<i128>(qv);
    }
    while (residual < -half) {
      --quotient;
      residual += static_cast<i128>(qv);
    }
    return static_cast<std::uint64_t>(quotient % t);
  }

  std::vector<u128> SampleUniform(RandomSource& rng) const {
    const u128 qv = q.value();
    const int bits = 128 - (qv >> 64 ? __builtin_clzll(static_cast<std::uint64_t>(qv >> 64))
                                     : 64 + __builtin_clzll(static_cast<std::uint64_t>(qv)));
    const u128 mask = bits >= 128 ? ~u128{0} : ((u128{1} << bits) - 1);
    std::vector<u128> out(n);
    for (auto& c : out) {
      do {
        u128 hi = rng.NextU64();
        c = ((hi << 64) | rng.NextU64()) & mask;
      } while (c >= qv);
    }
    return out;
  }

  std::vector<std::int8_t> SampleTernary(RandomSource& rng) const {
    std::vector<std::int8_t> out(n);
    for (auto& c : out) c = static_cast<std::int8_t>(rng.UniformU64(3)) - 1;
    return out;
  }

  // Rounded Gaussian, rejected beyond 6 sigma.
  std::vector<u128> SampleError(RandomSource& rng) const {
    std::normal_distribution<double> dist(0.0, params.err_stddev);
    std::vector<u128> out(n);
    for (auto& c : out) {
      std::int64_t v;
      do {
        v = std::llround(dist(rng));
      } while (v > error_cutoff || v < -error_cutoff);
      c = q.FromSigned(v);
    }
    return out;
  }

  std::vector<u128> Lift(const std::vector<std::int8_t>& small) const {
    std::vector<u128> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = q.FromSigned(small[i]);
    return out;
  }

  std::vector<u128> Multiply(std::vector<u128> a, std::vector<u128> b) const {
    if (!ntt) return NegacyclicMulSchoolbook(q, a, b);
    ntt->Forward(a);
    ntt->Forward(b);
    for (std::size_t i = 0; i < n; ++i) a[i] = q.Mul(a[i], b[i]);
    ntt->Inverse(a);
    return a;
  }

  // Product with an operand already in NTT + Montgomery form.
  std::vector<u128> MultiplyPrepared(const std::vector<u128>& prepared,
                                     std::vector<u128> b_ntt) const {
    for (std::size_t i = 0; i < n; ++i) {
      b_ntt[i] = q.MontMul(prepared[i], b_ntt[i]);
    }
    ntt->Inverse(b_ntt);
    return b_ntt;
  }

  std::vector<u128> Prepare(std::vector<u128> a) const {
    ntt->Forward(a);
    for (auto& x : a) x = q.ToMont(x);
    return a;
  }

  void CheckPoly(const RingPoly& p, u128 modulus, const char* what) const {
    if (p.coeffs.size() != n) {
      throw Error(ErrorCode::kParamMismatch,
                  std::string(what) + " has the wrong ring dimension");
    }
    for (u128 c : p.coeffs) {
      if (c >= modulus) {
        throw Error(ErrorCode::kParamMismatch,
                    std::string(what) + " coefficient out of range");
      }
    }
  }

  void CheckCiphertext(const Ciphertext& ct) const {
    CheckPoly(ct.c0, q.value(), "ciphertext");
    CheckPoly(ct.c1, q.value(), "ciphertext");
  }
};

Context::Context(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Context::~Context() = default;

std::shared_ptr<const Context> Context::Create(const BfvParams& params) {
  ParamReport report = ValidateParams(params);
  if (!report.ok()) {
    throw Error(ErrorCode::kInvalidParams,
                "invalid BFV parameters: " + report.Summary());
  }
  return std::shared_ptr<const Context>(
      new Context(std::make_unique<Impl>(params)));
}

const BfvParams& Context::params() const { return impl_->params; }
std::size_t Context::ring_dim() const { return impl_->n; }
std::uint64_t Context::plaintext_modulus() const { return impl_->t; }
u128 Context::ciphertext_modulus() const { return impl_->q.value(); }
bool Context::uses_ntt() const { return impl_->ntt.has_value(); }

RingPoly Context::Multiply(const RingPoly& a, const RingPoly& b) const {
  impl_->CheckPoly(a, impl_->q.value(), "operand");
  impl_->CheckPoly(b, impl_->q.value(), "operand");
  return {impl_->Multiply(a.coeffs, b.coeffs)};
}

KeyPair Context::KeyGen(RandomSource& rng) const {
  const Impl& m = *impl_;
  KeyPair keys;
  std::vector<u128> s = m.Lift(m.SampleTernary(rng));
  std::vector<u128> a = m.SampleUniform(rng);
  std::vector<u128> e = m.SampleError(rng);
  std::vector<u128> as = m.Multiply(a, s);
  keys.pub.pk0.coeffs.resize(m.n);
  for (std::size_t i = 0; i < m.n; ++i) {
    keys.pub.pk0.coeffs[i] = m.q.Neg(m.q.Add(as[i], e[i]));
  }
  keys.pub.pk1.coeffs = std::move(a);
  keys.secret.s.coeffs = std::move(s);
  return keys;
}

RingPoly Context::Encode(std::span<const std::uint64_t> values) const {
  if (values.size() > impl_->n) {
    throw Error(ErrorCode::kTooManyValues,
                "more values than ring coefficients");
  }
  RingPoly out{std::vector<u128>(impl_->n, 0)};
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.coeffs[i] = values[i] % impl_->t;
  }
  return out;
}

std::vector<std::uint64_t> Context::Decode(const RingPoly& plaintext) const {
  impl_->CheckPoly(plaintext, impl_->t, "plaintext");
  std::vector<std::uint64_t> out(plaintext.coeffs.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint64_t>(plaintext.coeffs[i]);
  }
  return out;
}

RingPoly Context::EncodeReplicated(std::uint64_t value) const {
  return {std::vector<u128>(impl_->n, value % impl_->t)};
}

RingPoly Context::ScalePlaintext(const RingPoly& plaintext) const {
  impl_->CheckPoly(plaintext, impl_->t, "plaintext");
  RingPoly out{std::vector<u128>(impl_->n)};
  for (std::size_t i = 0; i < impl_->n; ++i) {
    out.coeffs[i] =
        impl_->Scale(static_cast<std::uint64_t>(plaintext.coeffs[i]));
  }
  return out;
}

Ciphertext Context::EncryptSymmetric(const SecretKey& sk,
                                     const RingPoly& plaintext,
                                     RandomSource& rng) const {
  const Impl& m = *impl_;
  m.CheckPoly(sk.s, m.q.value(), "secret key");
  RingPoly scaled = ScalePlaintext(plaintext);
  std::vector<u128> a = m.SampleUniform(rng);
  std::vector<u128> e = m.SampleError(rng);
  std::vector<u128> as = m.Multiply(a, sk.s.coeffs);
  Ciphertext ct;
  ct.c0.coeffs.resize(m.n);
  ct.c1.coeffs.resize(m.n);
  for (std::size_t i = 0; i < m.n; ++i) {
    ct.c0.coeffs[i] = m.q.Add(m.q.Add(scaled.coeffs[i], as[i]), e[i]);
    ct.c1.coeffs[i] = m.q.Neg(a[i]);
  }
  return ct;
}

Ciphertext Context::EvalAdd(const Ciphertext& a, const Ciphertext& b) const {
  impl_->CheckCiphertext(a);
  impl_->CheckCiphertext(b);
  const Modulus128& q = impl_->q;
  Ciphertext out;
  out.c0.coeffs.resize(impl_->n);
  out.c1.coeffs.resize(impl_->n);
  for (std::size_t i = 0; i < impl_->n; ++i) {
    out.c0.coeffs[i] = q.Add(a.c0.coeffs[i], b.c0.coeffs[i]);
    out.c1.coeffs[i] = q.Add(a.c1.coeffs[i], b.c1.coeffs[i]);
  }
  out.op_count = a.op_count + b.op_count + 1;
  return out;
}

Ciphertext Context::EvalSub(const Ciphertext& a, const Ciphertext& b) const {
  impl_->CheckCiphertext(a);
  impl_->CheckCiphertext(b);
  const Modulus128& q = impl_->q;
  Ciphertext out;
  out.c0.coeffs.resize(impl_->n);
  out.c1.coeffs.resize(impl_->n);
  for (std::size_t i = 0; i < impl_->n; ++i) {
    out.c0.coeffs[i] = q.Sub(a.c0.coeffs[i], b.c0.coeffs[i]);
    out.c1.coeffs[i] = q.Sub(a.c1.coeffs[i], b.c1.coeffs[i]);
  }
  out.op_count = a.op_count + b.op_count + 1;
  return out;
}

u128 Context::FreshNoiseBound() const {
  return static_cast<u128>(impl_->error_cutoff) * (2 * impl_->n + 1) + 1;
}

u128 Context::NoiseThreshold() const {
  return impl_->q.value() / (2 * static_cast<u128>(impl_->t));
}

Encryptor::Encryptor(std::shared_ptr<const Context> context,
                     const PublicKey& pk)
    : context_(std::move(context)), pk_(pk) {
  const auto& m = context_->impl();
  m.CheckPoly(pk_.pk0, m.q.value(), "public key");
  m.CheckPoly(pk_.pk1, m.q.value(), "public key");
  if (m.ntt) {
    pk0_ntt_mont_ = m.Prepare(pk_.pk0.coeffs);
    pk1_ntt_mont_ = m.Prepare(pk_.pk1.coeffs);
  }
}

// c0 = pk0*u + e1 + round(q*m/t), c1 = pk1*u + e2, so that
// c0 + c1*s = round(q*m/t) - e*u + e1 + e2*s.
Ciphertext Encryptor::Encrypt(const RingPoly& plaintext,
                              RandomSource& rng) const {
  const auto& m = context_->impl();
  RingPoly scaled = context_->ScalePlaintext(plaintext);
  std::vector<u128> u = m.Lift(m.SampleTernary(rng));
  std::vector<u128> e1 = m.SampleError(rng);
  std::vector<u128> e2 = m.SampleError(rng);
  std::vector<u128> p0u, p1u;
  if (m.ntt) {
    m.ntt->Forward(u);
    p0u = m.MultiplyPrepared(pk0_ntt_mont_, u);
    p1u = m.MultiplyPrepared(pk1_ntt_mont_, std::move(u));
  } else {
    p0u = m.Multiply(pk_.pk0.coeffs, u);
    p1u = m.Multiply(pk_.pk1.coeffs, u);
  }
  Ciphertext ct;
  ct.c0.coeffs.resize(m.n);
  ct.c1.coeffs.resize(m.n);
  for (std::size_t i = 0; i < m.n; ++i) {
    ct.c0.coeffs[i] = m.q.Add(m.q.Add(p0u[i], e1[i]), scaled.coeffs[i]);
    ct.c1.coeffs[i] = m.q.Add(p1u[i], e2[i]);
  }
  return ct;
}

Decryptor::Decryptor(std::shared_ptr<const Context> context,
                     const SecretKey& sk)
    : context_(std::move(context)) {
  const auto& m = context_->impl();
  m.CheckPoly(sk.s, m.q.value(), "secret key");
  s_signed_.resize(m.n);
  for (std::size_t i = 0; i < m.n; ++i) {
    const i128 c = m.q.Centered(sk.s.coeffs[i]);
    if (c < -1 || c > 1) {
      throw Error(ErrorCode::kParamMismatch, "secret key is not ternary");
    }
    s_signed_[i] = static_cast<std::int8_t>(c);
  }
  if (m.ntt) s_ntt_mont_ = m.Prepare(sk.s.coeffs);
}

RingPoly Decryptor::Phase(const Ciphertext& ct) const {
  const auto& m = context_->impl();
  m.CheckCiphertext(ct);
  std::vector<u128> c1s;
  if (m.ntt) {
    std::vector<u128> c1 = ct.c1.coeffs;
    m.ntt->Forward(c1);
    c1s = m.MultiplyPrepared(s_ntt_mont_, std::move(c1));
  } else {
    c1s = m.Multiply(ct.c1.coeffs, m.Lift(s_signed_));
  }
  for (std::size_t i = 0; i < m.n; ++i) c1s[i] = m.q.Add(ct.c0.coeffs[i], c1s[i]);
  return {std::move(c1s)};
}

RingPoly Decryptor::Decrypt(const Ciphertext& ct) const {
  const auto& m = context_->impl();
  RingPoly phase = Phase(ct);
  for (auto& c : phase.coeffs) c = m.Unscale(c);
  return phase;
}

std::uint64_t Decryptor::DecryptCoefficient(const Ciphertext& ct,
                                            std::size_t index) const {
  const auto& m = context_->impl();
  if (index >= m.n) throw Error(ErrorCode::kInvalidArgument, "index >= n");
  m.CheckCiphertext(ct);
  // (c1*s)_k = sum_{i+j=k} c1_i s_j - sum_{i+j=k+n} c1_i s_j
  u128 acc = ct.c0.coeffs[index];
  for (std::size_t j = 0; j < m.n; ++j) {
    const std::int8_t sj = s_signed_[j];
    if (sj == 0) continue;
    u128 term;
    bool negate = false;
    if (j <= index) {
      term = ct.c1.coeffs[index - j];
    } else {
      term = ct.c1.coeffs[index + m.n - j];
      negate = true;
    }
    if (sj < 0) negate = !negate;
    acc = negate ? m.q.Sub(acc, term) : m.q.Add(acc, term);
  }
  return m.Unscale(acc);
}

u128 Decryptor::NoiseMagnitude(const Ciphertext& ct,
                               const RingPoly& expected) const {
  const auto& m = context_->impl();
  RingPoly phase = Phase(ct);
  RingPoly scaled = context_->ScalePlaintext(expected);
  u128 worst = 0;
  for (std::size_t i = 0; i < m.n; ++i) {
    i128 v = m.q.Centered(m.q.Sub(phase.coeffs[i], scaled.coeffs[i]));
    u128 mag = static_cast<u128>(v < 0 ? -v : v);
    worst = std::max(worst, mag);
  }
  return worst;
}

Ciphertext Encrypt(const std::shared_ptr<const Context>& context,
                   const PublicKey& pk, const RingPoly& plaintext,
                   RandomSource& rng) {
  return Encryptor(context, pk).Encrypt(plaintext, rng);
}

RingPoly Decrypt(const std::shared_ptr<const Context>& context,
                 const SecretKey& sk, const Ciphertext& ct) {
  return Decryptor(context, sk).Decrypt(ct);
}

}  // namespace helb::bfv
