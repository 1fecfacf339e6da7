#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "helb/error.h"
#include "helb/ipmatch.h"

namespace helb::ipmatch {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Runs test(i, rng) over [0, count) and returns the smallest index that
// tested true, or kNone. Without `exhaustive`, indices past a known match are
// skipped. The answer does not depend on the thread count.
std::size_t Scan(std::size_t count, const MatchOptions& opts,
                 RandomSource& rng,
                 const std::function<bool(std::size_t, RandomSource&)>& test) {
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, opts.threads), count));
  if (threads <= 1) {
    std::size_t best = kNone;
    for (std::size_t i = 0; i < count; ++i) {
      if (test(i, rng) && best == kNone) {
        best = i;
        if (!opts.exhaustive) break;
      }
    }
    return best;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{kNone};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<RandomSource> rngs;
  rngs.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) rngs.push_back(rng.Fork());

  auto worker = [&](unsigned w) {
    try {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) break;
        if (!opts.exhaustive && i > best.load()) break;
        if (!test(i, rngs[w])) continue;
        std::size_t current = best.load();
        while (i < current && !best.compare_exchange_weak(current, i)) {
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next.store(count);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return best.load();
}

struct Counters {
  std::atomic<std::uint64_t> ops{0};
  std::atomic<std::uint64_t> zero_tests{0};

  void Export(MatchStats& stats) const {
    stats.homomorphic_ops += ops.load();
    stats.zero_tests += zero_tests.load();
  }
};

[[noreturn]] void Mismatch(const std::string& what) {
  throw Error(ErrorCode::kSchemeMismatch, what);
}

const phe::KeyPair& PheKeysFor(const EncryptedStore& store,
                               const KeyMaterial& keys) {
  const auto* pk = std::get_if<phe::KeyPair>(&keys);
  const auto scheme = PheSchemeOf(store.scheme);
  if (!pk || !scheme || phe::SchemeOf(*pk) != *scheme) {
    Mismatch("key scheme does not match store scheme " +
             std::string(StoreSchemeName(store.scheme)));
  }
  return *pk;
}

const BfvKeys& BfvKeysFor(const EncryptedStore& store,
                          const KeyMaterial& keys) {
  const auto* bk = std::get_if<BfvKeys>(&keys);
  if (!bk) {
    Mismatch("key scheme does not match store scheme " +
             std::string(StoreSchemeName(store.scheme)));
  }
  return *bk;
}

std::string TryDecrypt(const phe::KeyPair& keys, const phe::Ciphertext& ct) {
  try {
    return phe::Decrypt(keys, ct).get_str();
  } catch (const Error&) {
    return {};
  }
}

void Record(MatchResult& result, const StoreGroup& group, std::size_t index) {
  result.matched = true;
  result.prefix_len = group.prefix_len;
  result.entry_id = group.entries[index].id;
}

// Shared driver for the one-ciphertext-per-entry protocols. `test` returns
// whether entry i of the group matches the encrypted target, and may fill
// the debug string.
template <class Target>
MatchResult ScanEntries(
    Ipv4Addr ip, const EncryptedStore& store, RandomSource& rng,
    const MatchOptions& opts,
    const std::function<Target(std::uint32_t, RandomSource&)>& encrypt,
    const std::function<bool(const Target&, const StoreEntry&, RandomSource&,
                             std::string*)>& test) {
  MatchResult result;
  Counters counters;
  for (const StoreGroup& group : store.groups) {
    const std::uint32_t masked = ip.value & PrefixToMask(group.prefix_len);
    const Target target = encrypt(masked, rng);
    ++result.stats.target_encryptions;
    std::vector<std::string> diffs(opts.debug ? group.entries.size() : 0);
    std::vector<char> tested(diffs.size(), 0);
    const std::size_t hit = Scan(
        group.entries.size(), opts, rng,
        [&](std::size_t i, RandomSource& wrng) {
          std::string* debug = opts.debug ? &diffs[i] : nullptr;
          if (opts.debug) tested[i] = 1;
          counters.ops.fetch_add(1);
          counters.zero_tests.fetch_add(1);
          return test(target, group.entries[i], wrng, debug);
        });
    for (std::size_t i = 0; i < diffs.size(); ++i) {
      if (tested[i]) {
        result.debug.push_back(
            {group.entries[i].id, group.prefix_len, std::move(diffs[i])});
      }
    }
    if (hit != kNone && !result.matched) {
      Record(result, group, hit);
      if (!opts.exhaustive) break;
    }
  }
  counters.Export(result.stats);
  return result;
}

}  // namespace

MatchResult MatchSubtract(Ipv4Addr ip, const EncryptedStore& store,
                          const KeyMaterial& keys, RandomSource& rng,
                          const MatchOptions& opts) {
  if (store.scheme == StoreScheme::kGoldwasserMicali) {
    Mismatch("subtraction match needs an additive scheme; use xor for "
             "goldwasser-micali");
  }
  if (store.packed()) {
    Mismatch("packed BFV stores use the batch match");
  }

  if (store.scheme == StoreScheme::kBfv) {
    const BfvKeys& bk = BfvKeysFor(store, keys);
    if (opts.blind) {
      throw Error(ErrorCode::kCapabilityUnsupported,
                  "blinding is not available for BFV");
    }
    const auto& ctx = bk.context;
    const bfv::Encryptor encryptor(ctx, bk.keys.pub);
    const bfv::Decryptor decryptor(ctx, bk.keys.secret);
    return ScanEntries<bfv::Ciphertext>(
        ip, store, rng, opts,
        [&](std::uint32_t masked, RandomSource& r) {
          const std::uint64_t v = masked;
          return encryptor.Encrypt(ctx->Encode({&v, 1}), r);
        },
        [&](const bfv::Ciphertext& target, const StoreEntry& entry,
            RandomSource&, std::string* debug) {
          const auto* ct = std::get_if<bfv::Ciphertext>(&entry.ct);
          if (!ct) Mismatch("store entry is not a BFV ciphertext");
          // Unpacked entries carry their value in coefficient 0 only.
          const std::uint64_t d =
              decryptor.DecryptCoefficient(ctx->EvalSub(target, *ct), 0);
          if (debug) *debug = std::to_string(d);
          return d == 0;
        });
  }

  const phe::KeyPair& pk = PheKeysFor(store, keys);
  const phe::PublicKey pub = phe::PublicPart(pk);
  return ScanEntries<phe::Ciphertext>(
      ip, store, rng, opts,
      [&](std::uint32_t masked, RandomSource& r) {
        return phe::Encrypt(pub, BigUint(masked), r);
      },
      [&](const phe::Ciphertext& target, const StoreEntry& entry,
          RandomSource& r, std::string* debug) {
        const auto* ct = std::get_if<phe::Ciphertext>(&entry.ct);
        if (!ct) Mismatch("store entry is not a PHE ciphertext");
        phe::Ciphertext diff = phe::Sub(pub, target, *ct);
        if (opts.blind) diff = phe::Blind(pub, diff, r);
        if (debug) *debug = TryDecrypt(pk, diff);
        return phe::IsZero(pk, diff);
      });
}

MatchResult MatchXor(Ipv4Addr ip, const EncryptedStore& store,
                     const KeyMaterial& keys, RandomSource& rng,
                     const MatchOptions& opts) {
  if (store.scheme != StoreScheme::kGoldwasserMicali) {
    Mismatch("xor match needs a goldwasser-micali store");
  }
  if (opts.blind) {
    throw Error(ErrorCode::kCapabilityUnsupported,
                "blinding is not available for xor match");
  }
  const phe::KeyPair& pk = PheKeysFor(store, keys);
  const phe::PublicKey pub = phe::PublicPart(pk);
  return ScanEntries<phe::Ciphertext>(
      ip, store, rng, opts,
      [&](std::uint32_t masked, RandomSource& r) {
        return phe::Encrypt(pub, BigUint(masked), r, phe::kGmDefaultWidth);
      },
      [&](const phe::Ciphertext& target, const StoreEntry& entry,
          RandomSource&, std::string* debug) {
        const auto* ct = std::get_if<phe::Ciphertext>(&entry.ct);
        if (!ct) Mismatch("store entry is not a PHE ciphertext");
        const phe::Ciphertext diff = phe::Xor(pub, target, *ct);
        if (debug) *debug = TryDecrypt(pk, diff);
        return phe::IsZero(pk, diff);
      });
}

MatchResult MatchBatchBfv(Ipv4Addr ip, const EncryptedStore& store,
                          const KeyMaterial& keys, RandomSource& rng,
                          const MatchOptions& opts) {
  if (!store.packed()) Mismatch("batch match needs a packed BFV store");
  if (opts.blind) {
    throw Error(ErrorCode::kCapabilityUnsupported,
                "blinding is not available for BFV");
  }
  const BfvKeys& bk = BfvKeysFor(store, keys);
  const auto& ctx = bk.context;
  const bfv::Encryptor encryptor(ctx, bk.keys.pub);
  const bfv::Decryptor decryptor(ctx, bk.keys.secret);

  MatchResult result;
  Counters counters;
  for (const StoreGroup& group : store.groups) {
    const std::uint32_t masked = ip.value & PrefixToMask(group.prefix_len);
    const bfv::Ciphertext target =
        encryptor.Encrypt(ctx->EncodeReplicated(masked), rng);
    ++result.stats.target_encryptions;
    std::vector<std::vector<std::uint64_t>> decoded(group.blocks.size());
    // Smallest matching slot per block, kNone if none.
    std::vector<std::size_t> slot(group.blocks.size(), kNone);
    const std::size_t hit = Scan(
        group.blocks.size(), opts, rng,
        [&](std::size_t b, RandomSource&) {
          const PackedBlock& block = group.blocks[b];
          counters.ops.fetch_add(1);
          counters.zero_tests.fetch_add(1);
          decoded[b] = ctx->Decode(
              decryptor.Decrypt(ctx->EvalSub(target, block.ct)));
          for (std::size_t j = 0; j < block.ids.size(); ++j) {
            if (decoded[b][j] == 0) {
              slot[b] = j;
              return true;
            }
          }
          return false;
        });
    if (opts.debug) {
      for (std::size_t b = 0; b < group.blocks.size(); ++b) {
        if (decoded[b].empty()) continue;
        for (std::size_t j = 0; j < group.blocks[b].ids.size(); ++j) {
          result.debug.push_back({group.blocks[b].ids[j], group.prefix_len,
                                  std::to_string(decoded[b][j])});
        }
      }
    }
    if (hit != kNone && !result.matched) {
      result.matched = true;
      result.prefix_len = group.prefix_len;
      result.entry_id = group.blocks[hit].ids[slot[hit]];
      if (!opts.exhaustive) break;
    }
  }
  counters.Export(result.stats);
  return result;
}

MatchResult Match(Ipv4Addr ip, const EncryptedStore& store,
                  const KeyMaterial& keys, Protocol protocol,
                  RandomSource& rng, const MatchOptions& opts) {
  if (store.packed()) {
    if (protocol != Protocol::kSubtract) {
      Mismatch("packed BFV stores only support subtraction");
    }
    return MatchBatchBfv(ip, store, keys, rng, opts);
  }
  return protocol == Protocol::kXor ? MatchXor(ip, store, keys, rng, opts)
                                    : MatchSubtract(ip, store, keys, rng, opts);
}

}  // namespace helb::ipmatch
