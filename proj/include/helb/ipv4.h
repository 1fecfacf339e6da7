#ifndef HELB_IPV4_H_
#define HELB_IPV4_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace helb::ipmatch {

struct Ipv4Addr {
  std::uint32_t value = 0;

  static Ipv4Addr FromOctets(std::uint8_t a, std::uint8_t b, std::uint8_t c,
                             std::uint8_t d) {
    return {(std::uint32_t{a} << 24) | (std::uint32_t{b} << 16) |
            (std::uint32_t{c} << 8) | d};
  }
  std::string ToString() const;

  friend auto operator<=>(const Ipv4Addr&, const Ipv4Addr&) = default;
};

// Dotted quad, first octet most significant. Throws kInvalidAddress.
Ipv4Addr ParseIpv4(std::string_view text);

// Top `prefix_len` bits set. Throws kInvalidPrefix outside [0, 32].
std::uint32_t PrefixToMask(int prefix_len);

struct CidrEntry {
  Ipv4Addr network;
  std::uint8_t prefix_len = 32;

  std::uint32_t mask() const { return PrefixToMask(prefix_len); }
  bool Contains(Ipv4Addr ip) const {
    return (ip.value & mask()) == network.value;
  }
  std::string ToString() const;

  friend auto operator<=>(const CidrEntry&, const CidrEntry&) = default;
};

struct ParsedCidr {
  CidrEntry entry;
  // Host bits were set in the input and have been cleared.
  bool normalized = false;
};

// "a.b.c.d/p"; a bare address is read as /32. Throws kInvalidAddress or
// kInvalidPrefix.
ParsedCidr ParseCidr(std::string_view text);

struct CidrList {
  std::vector<CidrEntry> entries;
  // One message per normalized line, e.g. "line 4: 10.1.2.3/8 -> 10.0.0.0/8".
  std::vector<std::string> warnings;
};

// One CIDR per line; '#' starts a comment, blank lines are skipped. Errors
// carry "<source>:<line>: ..." and the code of the underlying parse error.
CidrList ReadCidrList(std::istream& in, std::string_view source = "<input>");
CidrList ReadCidrListFile(const std::filesystem::path& path);

}  // namespace helb::ipmatch

#endif  // HELB_IPV4_H_
