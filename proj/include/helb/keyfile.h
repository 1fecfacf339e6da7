#ifndef HELB_KEYFILE_H_
#define HELB_KEYFILE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "helb/ipmatch.h"

namespace helb::cli {

// Text key files:
//
//   HELB-KEY v1
//   scheme = paillier
//   n = <lowercase hex>
//   ...
//
// Field names are fixed per scheme; a private file repeats the public fields
// followed by the private ones. BFV writes ring_dim, plaintext_mod,
// ciphertext_mod and sigma in decimal and polynomials as comma-separated hex
// coefficient lists.
inline constexpr std::string_view kKeyMagic = "HELB-KEY v1";

std::string SerializePublicKey(const ipmatch::PublicMaterial& pub);
std::string SerializePrivateKey(const ipmatch::KeyMaterial& keys);

struct LoadedKey {
  ipmatch::PublicMaterial pub;
  // Set when the file carries the private fields.
  std::optional<ipmatch::KeyMaterial> keys;
  std::string scheme;  // as written in the file
};

// Throws kFormat with the offending line, kInvalidParams for a rejected BFV
// parameter set.
LoadedKey ParseKey(std::string_view text);
LoadedKey LoadKey(const std::filesystem::path& path);

// Writes `<base>.pub` and `<base>.key`; the private file is created with
// mode 0600. Returns the two paths.
std::pair<std::filesystem::path, std::filesystem::path> WriteKeyFiles(
    const std::filesystem::path& base, const ipmatch::KeyMaterial& keys);

// Scheme names accepted by keygen: the six PHE names plus "bfv".
std::string_view KeySchemeName(const ipmatch::PublicMaterial& pub);

}  // namespace helb::cli

#endif  // HELB_KEYFILE_H_
