#include "helb/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>

#include "helb/error.h"

namespace helb::cli {

namespace {

using Clock = std::chrono::steady_clock;

double MsSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

Timing Summarize(const std::vector<double>& samples) {
  Timing t;
  if (samples.empty()) return t;
  double sum = 0;
  for (double s : samples) sum += s;
  t.mean_ms = sum / static_cast<double>(samples.size());
  if (samples.size() > 1) {
    double sq = 0;
    for (double s : samples) sq += (s - t.mean_ms) * (s - t.mean_ms);
    t.stddev_ms = std::sqrt(sq / static_cast<double>(samples.size() - 1));
  }
  return t;
}

RandomSource MakeRng(const std::optional<std::uint64_t>& seed) {
  return seed ? RandomSource::Seeded(*seed) : RandomSource::Cryptographic();
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// The two operands of the reference match: 2.3.4.5 and 2.3.4.7 under /24.
constexpr std::uint32_t kTarget = 0x02030405u & 0xFFFFFF00u;
constexpr std::uint32_t kNetwork = 0x02030407u & 0xFFFFFF00u;

struct Sample {
  double keypair, encrypt, op_decrypt;
};

Sample TimeBfv(const BenchConfig& config, RandomSource& rng) {
  Sample s{};
  auto start = Clock::now();
  auto ctx = bfv::Context::Create(config.bfv_params);
  const bfv::KeyPair keys = ctx->KeyGen(rng);
  s.keypair = MsSince(start);

  start = Clock::now();
  const bfv::Encryptor enc(ctx, keys.pub);
  const std::uint64_t a = kTarget, b = kNetwork;
  const bfv::Ciphertext ca = enc.Encrypt(ctx->Encode({&a, 1}), rng);
  const bfv::Ciphertext cb = enc.Encrypt(ctx->Encode({&b, 1}), rng);
  s.encrypt = MsSince(start);

  start = Clock::now();
  const bfv::Decryptor dec(ctx, keys.secret);
  const bfv::RingPoly diff = dec.Decrypt(ctx->EvalSub(ca, cb));
  s.op_decrypt = MsSince(start);
  if (diff.coeffs[0] != 0) {
    throw Error(ErrorCode::kDecryptionFailure, "bfv bench match failed");
  }
  return s;
}

Sample TimePhe(phe::SchemeId id, const BenchConfig& config,
               RandomSource& rng) {
  Sample s{};
  phe::KeygenOptions opts;
  opts.test_mode = config.seed.has_value();
  auto start = Clock::now();
  const phe::KeyPair keys = phe::KeyGen(id, config.bits, opts, rng);
  s.keypair = MsSince(start);

  const phe::PublicKey pub = phe::PublicPart(keys);
  start = Clock::now();
  const phe::Ciphertext ca = phe::Encrypt(pub, BigUint(kTarget), rng);
  const phe::Ciphertext cb = phe::Encrypt(pub, BigUint(kNetwork), rng);
  s.encrypt = MsSince(start);

  start = Clock::now();
  const phe::Ciphertext diff = phe::SupportsXor(id) ? phe::Xor(pub, ca, cb)
                                                    : phe::Sub(pub, ca, cb);
  const bool zero = phe::IsZero(keys, diff);
  s.op_decrypt = MsSince(start);
  if (!zero) {
    throw Error(ErrorCode::kDecryptionFailure,
                std::string(phe::SchemeName(id)) + " bench match failed");
  }
  return s;
}

}  // namespace

std::vector<std::string> BenchSchemeNames() {
  std::vector<std::string> names{"bfv"};
  for (auto id : phe::kAllSchemes) names.emplace_back(phe::SchemeName(id));
  return names;
}

ipmatch::KeyMaterial GenerateKeys(std::string_view scheme, unsigned bits,
                                  const bfv::BfvParams& bfv_params,
                                  const phe::KeygenOptions& opts,
                                  RandomSource& rng) {
  if (scheme == "bfv") {
    auto ctx = bfv::Context::Create(bfv_params);
    return ipmatch::BfvKeys{ctx, ctx->KeyGen(rng)};
  }
  const auto id = phe::ParseSchemeName(scheme);
  if (!id) {
    throw Error(ErrorCode::kInvalidOptions,
                "unknown scheme '" + std::string(scheme) + "'");
  }
  return phe::KeyGen(*id, bits, opts, rng);
}

std::vector<BenchRow> RunBench(const BenchConfig& config) {
  if (config.iterations < 1) {
    throw Error(ErrorCode::kInvalidOptions, "iterations must be >= 1");
  }
  RandomSource rng = MakeRng(config.seed);
  std::vector<BenchRow> rows;
  for (const std::string& name : config.schemes) {
    std::optional<phe::SchemeId> id;
    if (name != "bfv") {
      id = phe::ParseSchemeName(name);
      if (!id) {
        throw Error(ErrorCode::kInvalidOptions, "unknown scheme '" + name + "'");
      }
    }
    auto once = [&] {
      return id ? TimePhe(*id, config, rng) : TimeBfv(config, rng);
    };
    once();  // warm-up
    std::vector<double> kp, enc, op;
    for (unsigned i = 0; i < config.iterations; ++i) {
      const Sample s = once();
      kp.push_back(s.keypair);
      enc.push_back(s.encrypt);
      op.push_back(s.op_decrypt);
    }
    BenchRow row;
    row.scheme = id ? std::string(phe::SchemeLabel(*id)) : "BFV";
    row.keypair = Summarize(kp);
    row.encrypt = Summarize(enc);
    row.op_decrypt = Summarize(op);
    row.iterations = config.iterations;
    rows.push_back(std::move(row));
  }
  return rows;
}

void WriteBenchCsv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "scheme,iterations,keypair_ms,keypair_sd_ms,encrypt_ms,"
         "encrypt_sd_ms,op_decrypt_ms,op_decrypt_sd_ms\n";
  for (const auto& r : rows) {
    out << r.scheme << ',' << r.iterations << ','
        << Fixed(r.keypair.mean_ms, 4) << ',' << Fixed(r.keypair.stddev_ms, 4)
        << ',' << Fixed(r.encrypt.mean_ms, 4) << ','
        << Fixed(r.encrypt.stddev_ms, 4) << ','
        << Fixed(r.op_decrypt.mean_ms, 4) << ','
        << Fixed(r.op_decrypt.stddev_ms, 4) << '\n';
  }
}

void WriteBenchTable(std::ostream& out, const std::vector<BenchRow>& rows) {
  auto cell = [](const Timing& t) {
    return Fixed(t.mean_ms, 4) + " +/- " + Fixed(t.stddev_ms, 4);
  };
  out << std::left << std::setw(20) << "Method" << std::setw(26)
      << "Key pair (ms)" << std::setw(26) << "Encrypt (ms)"
      << "Operation and decrypt (ms)\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(20) << r.scheme << std::setw(26)
        << cell(r.keypair) << std::setw(26) << cell(r.encrypt)
        << cell(r.op_decrypt) << '\n';
  }
}

std::vector<ScaleRow> RunScale(const ScaleConfig& config) {
  if (config.counts.empty()) {
    throw Error(ErrorCode::kInvalidOptions, "no counts given");
  }
  RandomSource rng = MakeRng(config.seed);
  phe::KeygenOptions opts;
  opts.test_mode = config.seed.has_value();
  const ipmatch::KeyMaterial keys =
      GenerateKeys(config.scheme, config.bits, config.bfv_params, opts, rng);
  const ipmatch::PublicMaterial pub = ipmatch::PublicPart(keys);
  if (config.packed && config.scheme != "bfv") {
    throw Error(ErrorCode::kInvalidOptions, "--packed requires bfv");
  }

  std::vector<ScaleRow> rows;
  for (std::size_t count : config.counts) {
    if (count == 0) throw Error(ErrorCode::kInvalidOptions, "count must be >= 1");
    std::vector<ipmatch::CidrEntry> cidrs(count);
    for (auto& c : cidrs) {
      c.prefix_len = config.random_prefixes
                         ? static_cast<std::uint8_t>(8 + rng.UniformU64(25))
                         : 24;
      c.network.value = static_cast<std::uint32_t>(rng.NextU64()) &
                        ipmatch::PrefixToMask(c.prefix_len);
    }
    const ipmatch::CidrEntry& last = cidrs.back();
    const ipmatch::Ipv4Addr target{
        last.network.value |
        (static_cast<std::uint32_t>(rng.NextU64()) & ~last.mask())};

    auto start = Clock::now();
    ipmatch::BuildOptions build;
    build.packed = config.packed;
    const ipmatch::EncryptedStore store =
        ipmatch::BuildStore(cidrs, pub, rng, build);
    const double encrypt_ms = MsSince(start);

    ipmatch::MatchOptions mopts;
    mopts.exhaustive = true;
    mopts.threads = config.threads;
    std::vector<double> searches;
    for (unsigned r = 0; r < std::max(1u, config.search_repeats); ++r) {
      start = Clock::now();
      const auto result = ipmatch::Match(
          target, store, keys, ipmatch::DefaultProtocol(store.scheme), rng,
          mopts);
      searches.push_back(MsSince(start));
      if (!result.matched) {
        throw Error(ErrorCode::kDecryptionFailure,
                    "scale bench target did not match");
      }
    }
    std::sort(searches.begin(), searches.end());
    rows.push_back({count, encrypt_ms / 1000.0,
                    searches[searches.size() / 2] / 1000.0});
  }
  return rows;
}

void WriteScaleCsv(std::ostream& out, const std::vector<ScaleRow>& rows) {
  out << "n_addresses,encrypt_total_s,search_total_s\n";
  for (const auto& r : rows) {
    out << r.n_addresses << ',' << Fixed(r.encrypt_total_s, 6) << ','
        << Fixed(r.search_total_s, 6) << '\n';
  }
}

void WriteScaleTable(std::ostream& out, const std::vector<ScaleRow>& rows) {
  // Search time is the full exhaustive scan (every entry tested), i.e. the
  // worst case for locating the last entry.
  out << std::left << std::setw(16) << "IP addresses" << std::setw(24)
      << "Time to encrypt (s)" << "Total search time (s)\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(16) << r.n_addresses << std::setw(24)
        << Fixed(r.encrypt_total_s, 6) << Fixed(r.search_total_s, 6) << '\n';
  }
}

double LinearFitR2(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two points");
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw Error(ErrorCode::kInvalidArgument, "constant x");
  if (syy == 0) return 1.0;
  return (sxy * sxy) / (sxx * syy);
}

}  // namespace helb::cli
