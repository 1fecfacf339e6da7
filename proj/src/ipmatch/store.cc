#include <algorithm>
#include <ctime>
#include <map>
#include <set>

#include "helb/error.h"
#include "helb/ipmatch.h"

namespace helb::ipmatch {

namespace {

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};

std::string NowUtc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string_view StoreSchemeName(StoreScheme scheme) {
  switch (scheme) {
    case StoreScheme::kBfv:
      return "bfv";
    case StoreScheme::kBfvPacked:
      return "bfv-packed";
    default:
      return phe::SchemeName(*PheSchemeOf(scheme));
  }
}

std::optional<phe::SchemeId> PheSchemeOf(StoreScheme scheme) {
  const auto v = static_cast<std::uint8_t>(scheme);
  if (v >= 1 && v <= 6) return static_cast<phe::SchemeId>(v);
  return std::nullopt;
}

StoreScheme FromPheScheme(phe::SchemeId id) {
  return static_cast<StoreScheme>(static_cast<std::uint8_t>(id));
}

PublicMaterial PublicPart(const KeyMaterial& keys) {
  return std::visit(
      Overloaded{
          [](const phe::KeyPair& k) -> PublicMaterial {
            return phe::PublicPart(k);
          },
          [](const BfvKeys& k) -> PublicMaterial { return k.Public(); },
      },
      keys);
}

std::size_t EncryptedStore::entry_count() const {
  std::size_t total = 0;
  for (const auto& g : groups) {
    total += g.entries.size();
    for (const auto& b : g.blocks) total += b.ids.size();
  }
  return total;
}

Protocol DefaultProtocol(StoreScheme scheme) {
  return scheme == StoreScheme::kGoldwasserMicali ? Protocol::kXor
                                                  : Protocol::kSubtract;
}

EncryptedStore BuildStore(std::span<const CidrEntry> entries,
                          const PublicMaterial& pub, RandomSource& rng,
                          const BuildOptions& opts) {
  if (entries.empty()) {
    throw Error(ErrorCode::kEmptyInput, "blacklist has no entries");
  }
  EncryptedStore store;
  store.metadata.input_count = entries.size();
  store.metadata.created_utc = NowUtc();

  // prefix -> (id, masked network), longest prefix first.
  std::map<std::uint8_t, std::vector<std::pair<std::uint64_t, std::uint32_t>>,
           std::greater<>>
      grouped;
  std::set<std::pair<std::uint32_t, std::uint8_t>> seen;
  std::uint64_t next_id = 0;
  for (const CidrEntry& e : entries) {
    const std::uint32_t masked = e.network.value & PrefixToMask(e.prefix_len);
    if (!seen.insert({masked, e.prefix_len}).second) {
      ++store.metadata.duplicates_removed;
      continue;
    }
    grouped[e.prefix_len].push_back({next_id++, masked});
  }

  if (const auto* phe_pub = std::get_if<phe::PublicKey>(&pub)) {
    if (opts.packed) {
      throw Error(ErrorCode::kInvalidOptions, "packing requires BFV");
    }
    store.scheme = FromPheScheme(phe::SchemeOf(*phe_pub));
    for (const auto& [prefix, items] : grouped) {
      StoreGroup group{prefix, {}, {}};
      group.entries.reserve(items.size());
      for (const auto& [id, masked] : items) {
        group.entries.push_back(
            {id, phe::Encrypt(*phe_pub, BigUint(masked), rng)});
      }
      store.groups.push_back(std::move(group));
    }
    return store;
  }

  const auto& bfv_pub = std::get<BfvPublic>(pub);
  const auto& ctx = bfv_pub.context;
  bfv::Encryptor encryptor(ctx, bfv_pub.pk);
  store.scheme = opts.packed ? StoreScheme::kBfvPacked : StoreScheme::kBfv;
  const std::size_t n = ctx->ring_dim();
  const std::uint64_t sentinel = ctx->plaintext_modulus() - 1;
  for (const auto& [prefix, items] : grouped) {
    StoreGroup group{prefix, {}, {}};
    if (!opts.packed) {
      for (const auto& [id, masked] : items) {
        const std::uint64_t value = masked;
        group.entries.push_back(
            {id, encryptor.Encrypt(ctx->Encode({&value, 1}), rng)});
      }
    } else {
      for (std::size_t start = 0; start < items.size(); start += n) {
        const std::size_t end = std::min(items.size(), start + n);
        PackedBlock block;
        std::vector<std::uint64_t> values(n, sentinel);
        for (std::size_t i = start; i < end; ++i) {
          block.ids.push_back(items[i].first);
          values[i - start] = items[i].second;
        }
        block.ct = encryptor.Encrypt(ctx->Encode(values), rng);
        group.blocks.push_back(std::move(block));
      }
    }
    store.groups.push_back(std::move(group));
  }
  return store;
}

}  // namespace helb::ipmatch
