#include "helb/keyfile.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "helb/error.h"

namespace helb::cli {

namespace {

using bfv::u128;
using ipmatch::BfvKeys;
using ipmatch::BfvPublic;
using ipmatch::KeyMaterial;
using ipmatch::PublicMaterial;

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};

[[noreturn]] void Bad(const std::string& what) {
  throw Error(ErrorCode::kFormat, "key file: " + what);
}

std::string U128Hex(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v) {
    out.push_back("0123456789abcdef"[static_cast<unsigned>(v & 0xf)]);
    v >>= 4;
  }
  return {out.rbegin(), out.rend()};
}

u128 HexU128(std::string_view s) {
  if (s.empty() || s.size() > 32) Bad("bad coefficient '" + std::string(s) + "'");
  u128 v = 0;
  for (char c : s) {
    int d;
    if (c >= '0' && c <= '9') {
      d = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      d = c - 'a' + 10;
    } else {
      Bad("bad coefficient '" + std::string(s) + "'");
    }
    v = (v << 4) | static_cast<unsigned>(d);
  }
  return v;
}

class Writer {
 public:
  explicit Writer(std::string_view scheme) {
    out_ << kKeyMagic << "\nscheme = " << scheme << "\n";
  }
  void Hex(std::string_view name, const BigUint& v) {
    out_ << name << " = " << ToHex(v) << "\n";
  }
  void Raw(std::string_view name, std::string_view v) {
    out_ << name << " = " << v << "\n";
  }
  void HexList(std::string_view name, const std::vector<BigUint>& vs) {
    out_ << name << " = ";
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (i) out_ << ',';
      out_ << ToHex(vs[i]);
    }
    out_ << "\n";
  }
  void Poly(std::string_view name, const bfv::RingPoly& p) {
    out_ << name << " = ";
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
      if (i) out_ << ',';
      out_ << U128Hex(p.coeffs[i]);
    }
    out_ << "\n";
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string ShortestDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void WritePhePublic(Writer& w, const phe::PublicKey& pub) {
  std::visit(
      Overloaded{
          [&](const phe::PaillierKeys::Public& k) {
            w.Hex("n", k.n);
            w.Hex("g", k.g);
          },
          [&](const phe::DamgardJurikKeys::Public& k) {
            w.Hex("n", k.n);
            w.Hex("g", k.g);
            w.Hex("s", k.s);
          },
          [&](const phe::OkamotoUchiyamaKeys::Public& k) {
            w.Hex("n", k.n);
            w.Hex("g", k.g);
            w.Hex("h", k.h);
          },
          [&](const phe::BenalohKeys::Public& k) {
            w.Hex("y", k.y);
            w.Hex("r", k.r);
            w.Hex("n", k.n);
          },
          [&](const phe::NaccacheSternKeys::Public& k) {
            w.Hex("p", k.p);
            w.HexList("v", k.v);
            w.Hex("sigma", k.sigma);
            w.Hex("n_bits", k.n_bits);
          },
          [&](const phe::GoldwasserMicaliKeys::Public& k) {
            w.Hex("n", k.n);
            w.Hex("a", k.a);
          },
      },
      pub);
}

void WritePhePrivate(Writer& w, const phe::KeyPair& keys) {
  std::visit(
      Overloaded{
          [&](const phe::PaillierKeys& k) {
            w.Hex("lambda", k.priv.lambda);
            w.Hex("mu", k.priv.mu);
          },
          [&](const phe::DamgardJurikKeys& k) {
            w.Hex("lambda", k.priv.lambda);
            w.Hex("d", k.priv.d);
          },
          [&](const phe::OkamotoUchiyamaKeys& k) {
            w.Hex("p", k.priv.p);
            w.Hex("q", k.priv.q);
          },
          [&](const phe::BenalohKeys& k) {
            w.Hex("p", k.priv.p);
            w.Hex("q", k.priv.q);
            w.Hex("x", k.priv.x);
          },
          [&](const phe::NaccacheSternKeys& k) { w.Hex("s", k.priv.s); },
          [&](const phe::GoldwasserMicaliKeys& k) {
            w.Hex("p", k.priv.p);
            w.Hex("q", k.priv.q);
          },
      },
      keys);
}

void WriteBfvPublic(Writer& w, const BfvPublic& pub) {
  const bfv::BfvParams& p = pub.context->params();
  w.Raw("ring_dim", std::to_string(p.ring_dim));
  w.Raw("plaintext_mod", p.plaintext_mod.get_str());
  w.Raw("ciphertext_mod", p.ciphertext_mod.get_str());
  w.Raw("sigma", ShortestDouble(p.err_stddev));
  w.Poly("pk0", pub.pk.pk0);
  w.Poly("pk1", pub.pk.pk1);
}

// Fields of one file, consumed as they are read so leftovers can be flagged.
class Fields {
 public:
  void Add(std::string key, std::string value, std::size_t line) {
    if (!map_.emplace(key, std::move(value)).second) {
      Bad("line " + std::to_string(line) + ": duplicate field '" + key + "'");
    }
  }
  bool Has(const std::string& key) const { return map_.count(key) != 0; }
  std::string Take(const std::string& key) {
    auto it = map_.find(key);
    if (it == map_.end()) Bad("missing field '" + key + "'");
    std::string v = std::move(it->second);
    map_.erase(it);
    return v;
  }
  BigUint Hex(const std::string& key) {
    const std::string v = Take(key);
    for (char c : v) {
      if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
        Bad("field '" + key + "' is not lowercase hex");
      }
    }
    return FromHex(v);
  }
  unsigned Small(const std::string& key) {
    const BigUint v = Hex(key);
    if (!v.fits_uint_p()) Bad("field '" + key + "' too large");
    return static_cast<unsigned>(v.get_ui());
  }
  std::vector<BigUint> HexList(const std::string& key) {
    std::vector<BigUint> out;
    for (const auto& part : Split(Take(key))) out.push_back(FromHex(part));
    return out;
  }
  bfv::RingPoly Poly(const std::string& key) {
    bfv::RingPoly p;
    for (const auto& part : Split(Take(key))) p.coeffs.push_back(HexU128(part));
    return p;
  }
  void ExpectEmpty() const {
    if (!map_.empty()) Bad("unexpected field '" + map_.begin()->first + "'");
  }

 private:
  static std::vector<std::string> Split(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = s.find(',', start);
      out.push_back(s.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  }

  std::map<std::string, std::string> map_;
};

bool AnyOf(const Fields& f, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (f.Has(n)) return true;
  }
  return false;
}

LoadedKey ParsePhe(phe::SchemeId id, Fields& f) {
  LoadedKey out;
  using phe::SchemeId;
  switch (id) {
    case SchemeId::kPaillier: {
      phe::PaillierKeys k;
      k.pub.n = f.Hex("n");
      k.pub.g = f.Hex("g");
      out.pub = phe::PublicKey(k.pub);
      if (AnyOf(f, {"lambda", "mu"})) {
        k.priv.lambda = f.Hex("lambda");
        k.priv.mu = f.Hex("mu");
        out.keys = phe::KeyPair(k);
      }
      break;
    }
    case SchemeId::kDamgardJurik: {
      phe::DamgardJurikKeys k;
      k.pub.n = f.Hex("n");
      k.pub.g = f.Hex("g");
      k.pub.s = f.Small("s");
      if (k.pub.s < 1 || k.pub.s > 4) Bad("damgard-jurik s outside 1..4");
      out.pub = phe::PublicKey(k.pub);
      if (AnyOf(f, {"lambda", "d"})) {
        k.priv.lambda = f.Hex("lambda");
        k.priv.d = f.Hex("d");
        out.keys = phe::KeyPair(k);
      }
      break;
    }
    case SchemeId::kOkamotoUchiyama: {
      phe::OkamotoUchiyamaKeys k;
      k.pub.n = f.Hex("n");
      k.pub.g = f.Hex("g");
      k.pub.h = f.Hex("h");
      out.pub = phe::PublicKey(k.pub);
      if (AnyOf(f, {"p", "q"})) {
        k.priv.p = f.Hex("p");
        k.priv.q = f.Hex("q");
        out.keys = phe::KeyPair(k);
      }
      break;
    }
    case SchemeId::kBenaloh: {
      phe::BenalohKeys k;
      k.pub.y = f.Hex("y");
      k.pub.r = f.Hex("r");
      k.pub.n = f.Hex("n");
      out.pub = phe::PublicKey(k.pub);
      if (AnyOf(f, {"p", "q", "x"})) {
        k.priv.p = f.Hex("p");
        k.priv.q = f.Hex("q");
        k.priv.x = f.Hex("x");
        out.keys = phe::KeyPair(k);
      }
      break;
    }
    case SchemeId::kNaccacheStern: {
      phe::NaccacheSternKeys k;
      k.pub.p = f.Hex("p");
      k.pub.v = f.HexList("v");
      k.pub.sigma = f.Hex("sigma");
      k.pub.n_bits = f.Small("n_bits");
      if (k.pub.v.size() != k.pub.n_bits) Bad("naccache-stern v has wrong length");
      out.pub = phe::PublicKey(k.pub);
      if (AnyOf(f, {"s"})) {
        k.priv.s = f.Hex("s");
        out.keys = phe::KeyPair(k);
      }
      break;
    }
    case SchemeId::kGoldwasserMicali: {
      phe::GoldwasserMicaliKeys k;
      k.pub.n = f.Hex("n");
      k.pub.a = f.Hex("a");
      out.pub = phe::PublicKey(k.pub);
      if (AnyOf(f, {"p", "q"})) {
        k.priv.p = f.Hex("p");
        k.priv.q = f.Hex("q");
        out.keys = phe::KeyPair(k);
      }
      break;
    }
  }
  return out;
}

LoadedKey ParseBfv(Fields& f) {
  bfv::BfvParams params;
  const std::string dim = f.Take("ring_dim");
  unsigned long long n = 0;
  auto [ptr, ec] = std::from_chars(dim.data(), dim.data() + dim.size(), n);
  if (ec != std::errc() || ptr != dim.data() + dim.size() || n > (1u << 30)) {
    Bad("bad ring_dim");
  }
  params.ring_dim = static_cast<std::uint32_t>(n);
  try {
    params.plaintext_mod = BigUint(f.Take("plaintext_mod"), 10);
    params.ciphertext_mod = BigUint(f.Take("ciphertext_mod"), 10);
  } catch (const std::invalid_argument&) {
    Bad("bad modulus");
  }
  const std::string sigma = f.Take("sigma");
  auto [sp, sec] =
      std::from_chars(sigma.data(), sigma.data() + sigma.size(), params.err_stddev);
  if (sec != std::errc() || sp != sigma.data() + sigma.size()) Bad("bad sigma");

  BfvPublic pub{bfv::Context::Create(params), {}};
  pub.pk.pk0 = f.Poly("pk0");
  pub.pk.pk1 = f.Poly("pk1");
  // Validates sizes and ranges.
  bfv::Encryptor check(pub.context, pub.pk);
  LoadedKey out;
  out.pub = pub;
  if (f.Has("sk")) {
    BfvKeys keys{pub.context, {}};
    keys.keys.pub = pub.pk;
    keys.keys.secret.s = f.Poly("sk");
    bfv::Decryptor check_sk(pub.context, keys.keys.secret);
    out.keys = keys;
  }
  return out;
}

}  // namespace

std::string_view KeySchemeName(const PublicMaterial& pub) {
  if (const auto* p = std::get_if<phe::PublicKey>(&pub)) {
    return phe::SchemeName(phe::SchemeOf(*p));
  }
  return "bfv";
}

std::string SerializePublicKey(const PublicMaterial& pub) {
  Writer w(KeySchemeName(pub));
  std::visit(Overloaded{
                 [&](const phe::PublicKey& k) { WritePhePublic(w, k); },
                 [&](const BfvPublic& k) { WriteBfvPublic(w, k); },
             },
             pub);
  return w.str();
}

std::string SerializePrivateKey(const KeyMaterial& keys) {
  const PublicMaterial pub = ipmatch::PublicPart(keys);
  Writer w(KeySchemeName(pub));
  std::visit(Overloaded{
                 [&](const phe::KeyPair& k) {
                   WritePhePublic(w, phe::PublicPart(k));
                   WritePhePrivate(w, k);
                 },
                 [&](const BfvKeys& k) {
                   WriteBfvPublic(w, k.Public());
                   w.Poly("sk", k.keys.secret.s);
                 },
             },
             keys);
  return w.str();
}

LoadedKey ParseKey(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  bool header = false;
  std::string scheme;
  Fields fields;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != kKeyMagic) Bad("missing '" + std::string(kKeyMagic) + "' header");
      header = true;
      continue;
    }
    const std::size_t eq = line.find(" = ");
    if (eq == std::string::npos || eq == 0) {
      Bad("line " + std::to_string(number) + ": expected 'name = value'");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 3);
    if (key == "scheme") {
      if (!scheme.empty()) Bad("duplicate scheme line");
      scheme = value;
      continue;
    }
    fields.Add(std::move(key), std::move(value), number);
  }
  if (!header) Bad("empty file");
  if (scheme.empty()) Bad("missing scheme line");

  LoadedKey out;
  if (scheme == "bfv") {
    out = ParseBfv(fields);
  } else if (auto id = phe::ParseSchemeName(scheme)) {
    out = ParsePhe(*id, fields);
  } else {
    Bad("unknown scheme '" + scheme + "'");
  }
  fields.ExpectEmpty();
  out.scheme = scheme;
  return out;
}

LoadedKey LoadKey(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return ParseKey(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

namespace {

void WriteFile(const std::filesystem::path& path, const std::string& data,
               mode_t mode) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, mode);
  if (fd < 0) throw Error(ErrorCode::kIo, "cannot create " + path.string());
  // An existing file keeps its old mode through O_CREAT; tighten it.
  ::fchmod(fd, mode);
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::write(fd, data.data() + done, data.size() - done);
    if (n <= 0) {
      ::close(fd);
      throw Error(ErrorCode::kIo, "write failed for " + path.string());
    }
    done += static_cast<std::size_t>(n);
  }
  if (::close(fd) != 0) {
    throw Error(ErrorCode::kIo, "close failed for " + path.string());
  }
}

}  // namespace

std::pair<std::filesystem::path, std::filesystem::path> WriteKeyFiles(
    const std::filesystem::path& base, const KeyMaterial& keys) {
  std::filesystem::path pub_path = base, key_path = base;
  pub_path += ".pub";
  key_path += ".key";
  WriteFile(pub_path, SerializePublicKey(ipmatch::PublicPart(keys)), 0644);
  WriteFile(key_path, SerializePrivateKey(keys), 0600);
  return {pub_path, key_path};
}

}  // namespace helb::cli
