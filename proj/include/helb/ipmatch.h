#ifndef HELB_IPMATCH_H_
#define HELB_IPMATCH_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "helb/bfv.h"
#include "helb/ipv4.h"
#include "helb/phe.h"
#include "helb/random.h"

namespace helb::ipmatch {

// Scheme tag shared with the store file format: 1..6 are the PHE schemes
// (same numbering as phe::SchemeId), 7 is BFV with one entry per ciphertext,
// 8 is BFV with entries packed into coefficients.
enum class StoreScheme : std::uint8_t {
  kPaillier = 1,
  kDamgardJurik,
  kOkamotoUchiyama,
  kBenaloh,
  kNaccacheStern,
  kGoldwasserMicali,
  kBfv,
  kBfvPacked,
};

std::string_view StoreSchemeName(StoreScheme scheme);
std::optional<phe::SchemeId> PheSchemeOf(StoreScheme scheme);
StoreScheme FromPheScheme(phe::SchemeId id);

struct BfvPublic {
  std::shared_ptr<const bfv::Context> context;
  bfv::PublicKey pk;
};

struct BfvKeys {
  std::shared_ptr<const bfv::Context> context;
  bfv::KeyPair keys;

  BfvPublic Public() const { return {context, keys.pub}; }
};

using PublicMaterial = std::variant<phe::PublicKey, BfvPublic>;
using KeyMaterial = std::variant<phe::KeyPair, BfvKeys>;

PublicMaterial PublicPart(const KeyMaterial& keys);

struct StoreEntry {
  std::uint64_t id = 0;
  std::variant<phe::Ciphertext, bfv::Ciphertext> ct;
};

// Up to n entries of one group in the coefficients of a single ciphertext;
// coefficient i holds the masked network of ids[i], unused ones t - 1.
struct PackedBlock {
  std::vector<std::uint64_t> ids;
  bfv::Ciphertext ct;
};

struct StoreGroup {
  std::uint8_t prefix_len = 0;
  std::vector<StoreEntry> entries;  // unpacked stores
  std::vector<PackedBlock> blocks;  // packed stores
};

struct StoreMetadata {
  std::size_t input_count = 0;
  std::size_t duplicates_removed = 0;
  std::string created_utc;  // ISO 8601; not serialized
};

// Groups are ordered by prefix length, longest first. Prefix lengths and
// group sizes are visible to anyone holding the store.
struct EncryptedStore {
  StoreScheme scheme = StoreScheme::kPaillier;
  std::vector<StoreGroup> groups;
  StoreMetadata metadata;

  std::size_t entry_count() const;
  bool packed() const { return scheme == StoreScheme::kBfvPacked; }
};

struct BuildOptions {
  // BFV only: pack each group into ceil(size / n) ciphertexts.
  bool packed = false;
};

// Masks, deduplicates and encrypts. Entry ids are positions in the
// deduplicated input order. Throws kEmptyInput for an empty list.
EncryptedStore BuildStore(std::span<const CidrEntry> entries,
                          const PublicMaterial& pub, RandomSource& rng,
                          const BuildOptions& opts = {});

enum class Protocol { kSubtract, kXor };

struct MatchOptions {
  // Test every entry instead of stopping at the first match.
  bool exhaustive = false;
  // Multiply each difference by a random unit before the zero test.
  bool blind = false;
  unsigned threads = 1;
  // Record the decrypted per-entry differences in MatchResult::debug.
  bool debug = false;
};

struct MatchStats {
  std::uint64_t target_encryptions = 0;
  // sub / xor / eval_sub calls on ciphertexts.
  std::uint64_t homomorphic_ops = 0;
  std::uint64_t zero_tests = 0;
};

struct DebugRecord {
  std::uint64_t entry_id = 0;
  std::uint8_t prefix_len = 0;
  // Decimal plaintext of the difference, or empty if it cannot be decrypted.
  std::string difference;
};

struct MatchResult {
  bool matched = false;
  std::optional<std::uint64_t> entry_id;
  std::optional<std::uint8_t> prefix_len;
  MatchStats stats;
  std::vector<DebugRecord> debug;
};

// Subtraction match for the additive schemes and unpacked BFV.
MatchResult MatchSubtract(Ipv4Addr ip, const EncryptedStore& store,
                          const KeyMaterial& keys, RandomSource& rng,
                          const MatchOptions& opts = {});
// Bitwise XOR match for Goldwasser-Micali stores.
MatchResult MatchXor(Ipv4Addr ip, const EncryptedStore& store,
                     const KeyMaterial& keys, RandomSource& rng,
                     const MatchOptions& opts = {});
// One eval_sub per packed block against the replicated masked target.
MatchResult MatchBatchBfv(Ipv4Addr ip, const EncryptedStore& store,
                          const KeyMaterial& keys, RandomSource& rng,
                          const MatchOptions& opts = {});

// Picks MatchBatchBfv for packed stores, otherwise the requested protocol.
MatchResult Match(Ipv4Addr ip, const EncryptedStore& store,
                  const KeyMaterial& keys, Protocol protocol,
                  RandomSource& rng, const MatchOptions& opts = {});

// The protocol a scheme supports.
Protocol DefaultProtocol(StoreScheme scheme);

}  // namespace helb::ipmatch

#endif  // HELB_IPMATCH_H_
