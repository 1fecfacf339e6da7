#include "helb/store_file.h"

#include <fstream>
#include <iterator>

#include "helb/error.h"

namespace helb::cli {

namespace {

using bfv::u128;
using ipmatch::EncryptedStore;
using ipmatch::StoreScheme;

constexpr std::uint8_t kMagic[4] = {'H', 'E', 'L', 'B'};

[[noreturn]] void Bad(const std::string& what) {
  throw Error(ErrorCode::kFormat, "store file: " + what);
}

class Out {
 public:
  void U8(std::uint8_t v) { buf_.push_back(v); }
  void U32(std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void U64(std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void Bytes(std::span<const std::uint8_t> b) {
    U32(static_cast<std::uint32_t>(b.size()));
    buf_.insert(buf_.end(), b.begin(), b.end());
  }
  void Big(const BigUint& v) { Bytes(ToBytes(v)); }
  void Wide(u128 v) {
    std::uint8_t tmp[16];
    int len = 0;
    for (int s = 120; s >= 0; s -= 8) {
      const auto byte = static_cast<std::uint8_t>(v >> s);
      if (len == 0 && byte == 0) continue;
      tmp[len++] = byte;
    }
    Bytes({tmp, static_cast<std::size_t>(len)});
  }
  std::vector<std::uint8_t> Take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class In {
 public:
  explicit In(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t U8() { return Need(1)[0]; }
  std::uint32_t U32() {
    auto b = Need(4);
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
           (std::uint32_t{b[2]} << 8) | b[3];
  }
  std::uint64_t U64() {
    const std::uint64_t hi = U32();
    return (hi << 32) | U32();
  }
  std::span<const std::uint8_t> Bytes() {
    auto b = Need(U32());
    if (!b.empty() && b[0] == 0) Bad("non-canonical element at offset " + std::to_string(pos_));
    return b;
  }
  BigUint Big() { return FromBytes(Bytes()); }
  u128 Wide() {
    auto b = Bytes();
    if (b.size() > 16) Bad("coefficient wider than 128 bits");
    u128 v = 0;
    for (auto byte : b) v = (v << 8) | byte;
    return v;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  std::span<const std::uint8_t> Need(std::size_t n) {
    if (data_.size() - pos_ < n) Bad("truncated at offset " + std::to_string(pos_));
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

void WritePoly(Out& out, const bfv::RingPoly& p) {
  for (u128 c : p.coeffs) out.Wide(c);
}

bfv::RingPoly ReadPoly(In& in, std::size_t n) {
  bfv::RingPoly p;
  p.coeffs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) p.coeffs.push_back(in.Wide());
  return p;
}

}  // namespace

std::vector<std::uint8_t> SerializeStore(const EncryptedStore& store) {
  Out out;
  for (auto b : kMagic) out.U8(b);
  out.U8(kStoreVersion);
  out.U8(static_cast<std::uint8_t>(store.scheme));
  out.U32(static_cast<std::uint32_t>(store.groups.size()));
  for (const auto& group : store.groups) {
    out.U8(group.prefix_len);
    if (store.packed()) {
      out.U32(static_cast<std::uint32_t>(group.blocks.size()));
      for (const auto& block : group.blocks) {
        out.U64(block.ids.empty() ? 0 : block.ids.front());
        const std::size_t n = block.ct.c0.coeffs.size();
        out.U32(static_cast<std::uint32_t>(1 + block.ids.size() + 2 * n));
        out.Big(BigUint(static_cast<unsigned long>(block.ids.size())));
        for (auto id : block.ids) out.Wide(id);
        WritePoly(out, block.ct.c0);
        WritePoly(out, block.ct.c1);
      }
      continue;
    }
    out.U32(static_cast<std::uint32_t>(group.entries.size()));
    for (const auto& entry : group.entries) {
      out.U64(entry.id);
      if (const auto* ct = std::get_if<phe::Ciphertext>(&entry.ct)) {
        out.U32(static_cast<std::uint32_t>(ct->payload.size()));
        for (const auto& e : ct->payload) out.Big(e);
      } else {
        const auto& b = std::get<bfv::Ciphertext>(entry.ct);
        out.U32(static_cast<std::uint32_t>(2 * b.c0.coeffs.size()));
        WritePoly(out, b.c0);
        WritePoly(out, b.c1);
      }
    }
  }
  return out.Take();
}

EncryptedStore ParseStore(std::span<const std::uint8_t> data) {
  In in(data);
  for (auto b : kMagic) {
    if (in.U8() != b) Bad("bad magic");
  }
  if (const auto v = in.U8(); v != kStoreVersion) {
    Bad("unsupported version " + std::to_string(v));
  }
  EncryptedStore store;
  const std::uint8_t scheme = in.U8();
  if (scheme < 1 || scheme > 8) Bad("unknown scheme byte " + std::to_string(scheme));
  store.scheme = static_cast<StoreScheme>(scheme);
  const auto phe_scheme = ipmatch::PheSchemeOf(store.scheme);

  const std::uint32_t group_count = in.U32();
  int last_prefix = 33;
  for (std::uint32_t g = 0; g < group_count; ++g) {
    ipmatch::StoreGroup group;
    group.prefix_len = in.U8();
    if (group.prefix_len > 32) Bad("prefix length above 32");
    if (group.prefix_len >= last_prefix) Bad("groups not in descending prefix order");
    last_prefix = group.prefix_len;
    const std::uint32_t entries = in.U32();
    for (std::uint32_t e = 0; e < entries; ++e) {
      const std::uint64_t id = in.U64();
      const std::uint32_t count = in.U32();
      if (phe_scheme) {
        phe::Ciphertext ct{*phe_scheme, {}};
        for (std::uint32_t i = 0; i < count; ++i) ct.payload.push_back(in.Big());
        group.entries.push_back({id, std::move(ct)});
      } else if (!store.packed()) {
        if (count == 0 || count % 2 != 0) Bad("odd BFV element count");
        bfv::Ciphertext ct;
        ct.c0 = ReadPoly(in, count / 2);
        ct.c1 = ReadPoly(in, count / 2);
        group.entries.push_back({id, std::move(ct)});
      } else {
        if (count == 0) Bad("empty packed block");
        const u128 used = in.Wide();
        if (used == 0 || used >= count || (count - 1 - used) % 2 != 0) {
          Bad("inconsistent packed block");
        }
        ipmatch::PackedBlock block;
        for (u128 i = 0; i < used; ++i) {
          const u128 v = in.Wide();
          if (v >> 64) Bad("entry id wider than 64 bits");
          block.ids.push_back(static_cast<std::uint64_t>(v));
        }
        if (block.ids.front() != id) Bad("packed block id mismatch");
        const std::size_t n = (count - 1 - static_cast<std::size_t>(used)) / 2;
        if (used > n) Bad("more ids than slots");
        block.ct.c0 = ReadPoly(in, n);
        block.ct.c1 = ReadPoly(in, n);
        group.blocks.push_back(std::move(block));
      }
    }
    store.groups.push_back(std::move(group));
  }
  if (!in.done()) Bad("trailing bytes");
  return store;
}

void SaveStore(const std::filesystem::path& path, const EncryptedStore& store) {
  const auto bytes = SerializeStore(store);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

EncryptedStore LoadStore(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return ParseStore(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace helb::cli
