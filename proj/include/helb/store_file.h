#ifndef HELB_STORE_FILE_H_
#define HELB_STORE_FILE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "helb/ipmatch.h"

namespace helb::cli {

// Binary store layout, all integers big-endian:
//
//   "HELB" | version 0x01 | scheme byte | u32 group count
//   per group:  u8 prefix | u32 entry count
//   per entry:  u64 entry id | u32 element count | elements
//   element:    u32 length | magnitude bytes (big-endian, no leading zeros)
//
// PHE entries hold the ciphertext payload (one element per GM bit). BFV
// entries hold c0 then c1 coefficients. A packed BFV entry is one block:
// [used slots, ids..., c0..., c1...] with the entry id set to the first id.
inline constexpr std::uint8_t kStoreVersion = 0x01;

std::vector<std::uint8_t> SerializeStore(const ipmatch::EncryptedStore& store);
// Throws kFormat on a bad magic, version, scheme byte or truncated input.
ipmatch::EncryptedStore ParseStore(std::span<const std::uint8_t> data);

void SaveStore(const std::filesystem::path& path,
               const ipmatch::EncryptedStore& store);
ipmatch::EncryptedStore LoadStore(const std::filesystem::path& path);

}  // namespace helb::cli

#endif  // HELB_STORE_FILE_H_
