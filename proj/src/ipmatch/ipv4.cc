#include "helb/ipv4.h"

#include <charconv>
#include <fstream>

#include "helb/error.h"

namespace helb::ipmatch {

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool ParseDecimal(std::string_view s, unsigned max, unsigned& out) {
  if (s.empty() || s.size() > 3) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && out <= max;
}

}  // namespace

std::string Ipv4Addr::ToString() const {
  return std::to_string(value >> 24) + "." +
         std::to_string((value >> 16) & 0xff) + "." +
         std::to_string((value >> 8) & 0xff) + "." +
         std::to_string(value & 0xff);
}

Ipv4Addr ParseIpv4(std::string_view text) {
  std::uint32_t value = 0;
  std::size_t fields = 0;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = text.find('.', pos);
    const std::string_view part = text.substr(
        pos, dot == std::string_view::npos ? std::string_view::npos
                                           : dot - pos);
    unsigned octet = 0;
    if (!ParseDecimal(part, 255, octet) || ++fields > 4) {
      throw Error(ErrorCode::kInvalidAddress,
                  "invalid IPv4 address '" + std::string(text) + "'");
    }
    value = (value << 8) | octet;
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  if (fields != 4) {
    throw Error(ErrorCode::kInvalidAddress,
                "invalid IPv4 address '" + std::string(text) + "'");
  }
  return {value};
}

std::uint32_t PrefixToMask(int prefix_len) {
  if (prefix_len < 0 || prefix_len > 32) {
    throw Error(ErrorCode::kInvalidPrefix,
                "prefix length " + std::to_string(prefix_len) +
                    " outside [0, 32]");
  }
  if (prefix_len == 0) return 0;
  return ~std::uint32_t{0} << (32 - prefix_len);
}

std::string CidrEntry::ToString() const {
  return network.ToString() + "/" + std::to_string(prefix_len);
}

ParsedCidr ParseCidr(std::string_view text) {
  const std::size_t slash = text.find('/');
  const Ipv4Addr addr = ParseIpv4(text.substr(0, slash));
  unsigned prefix = 32;
  if (slash != std::string_view::npos) {
    const std::string_view p = text.substr(slash + 1);
    if (!ParseDecimal(p, 999, prefix) || prefix > 32) {
      throw Error(ErrorCode::kInvalidPrefix,
                  "invalid prefix length in '" + std::string(text) + "'");
    }
  }
  ParsedCidr out;
  out.entry.prefix_len = static_cast<std::uint8_t>(prefix);
  out.entry.network.value = addr.value & PrefixToMask(static_cast<int>(prefix));
  out.normalized = out.entry.network != addr;
  return out;
}

CidrList ReadCidrList(std::istream& in, std::string_view source) {
  CidrList list;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = Trim(view);
    if (view.empty()) continue;
    const std::string where =
        std::string(source) + ":" + std::to_string(number) + ": ";
    try {
      ParsedCidr parsed = ParseCidr(view);
      if (parsed.normalized) {
        list.warnings.push_back(where + std::string(view) + " -> " +
                                parsed.entry.ToString());
      }
      list.entries.push_back(parsed.entry);
    } catch (const Error& e) {
      throw Error(e.code(), where + e.what());
    }
  }
  if (in.bad()) {
    throw Error(ErrorCode::kIo, "read error in " + std::string(source));
  }
  return list;
}

CidrList ReadCidrListFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  return ReadCidrList(in, path.string());
}

}  // namespace helb::ipmatch
