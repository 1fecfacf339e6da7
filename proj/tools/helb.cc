// helb: encrypted IPv4 blacklist matching.
//
//   helb keygen --scheme paillier --bits 2048 --out keys/paillier
//   helb blacklist encrypt --pub keys/paillier.pub --cidrs list.txt --out bl.store
//   helb match --key keys/paillier.key --store bl.store --ip 2.3.4.5
//   helb bench --format csv
//   helb bench scale --counts 50,100,200
//
// match exits 0 on a match, 1 on no match, 2 on any error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "helb/bench.h"
#include "helb/error.h"
#include "helb/ipmatch.h"
#include "helb/keyfile.h"
#include "helb/store_file.h"
#include "json.hpp"

namespace {

using namespace helb;

constexpr int kExitMatch = 0;
constexpr int kExitNoMatch = 1;
constexpr int kExitError = 2;

struct Globals {
  std::optional<std::uint64_t> seed;
};

RandomSource MakeRng(const Globals& g) {
  return g.seed ? RandomSource::Seeded(*g.seed) : RandomSource::Cryptographic();
}

bfv::BfvParams ProfileByName(const std::string& name) {
  if (name == "desk") return bfv::DeskProfile();
  if (name == "paper") return bfv::PaperProfile();
  if (name == "test") return bfv::TestProfile();
  throw Error(ErrorCode::kInvalidOptions, "unknown BFV profile '" + name + "'");
}

std::vector<std::string> SplitComma(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

struct KeygenArgs {
  std::string scheme;
  unsigned bits = 2048;
  std::string profile = "desk";
  unsigned dj_s = 1;
  std::string benaloh_r;
  std::string out;
};

int RunKeygen(const Globals& g, const KeygenArgs& a) {
  phe::KeygenOptions opts;
  opts.test_mode = g.seed.has_value();
  opts.dj_s = a.dj_s;
  if (!a.benaloh_r.empty()) {
    try {
      opts.benaloh_block = BigUint(a.benaloh_r, 10);
    } catch (const std::invalid_argument&) {
      throw Error(ErrorCode::kInvalidOptions, "--benaloh-r must be decimal");
    }
  }
  RandomSource rng = MakeRng(g);
  const auto keys =
      cli::GenerateKeys(a.scheme, a.bits, ProfileByName(a.profile), opts, rng);
  const auto [pub, priv] = cli::WriteKeyFiles(a.out, keys);
  std::cout << "public key:  " << pub.string() << "\n"
            << "private key: " << priv.string() << "\n";
  return 0;
}

struct EncryptArgs {
  std::string pub;
  std::string cidrs;
  std::string out;
  bool packed = false;
};

int RunBlacklistEncrypt(const Globals& g, const EncryptArgs& a) {
  const cli::LoadedKey key = cli::LoadKey(a.pub);
  const ipmatch::CidrList list = ipmatch::ReadCidrListFile(a.cidrs);
  for (const auto& w : list.warnings) {
    std::cerr << "warning: host bits cleared: " << w << "\n";
  }
  RandomSource rng = MakeRng(g);
  ipmatch::BuildOptions opts;
  opts.packed = a.packed;
  const auto store = ipmatch::BuildStore(list.entries, key.pub, rng, opts);
  cli::SaveStore(a.out, store);
  std::cout << "scheme: " << ipmatch::StoreSchemeName(store.scheme) << "\n"
            << "entries: " << store.entry_count() << "\n"
            << "duplicates removed: " << store.metadata.duplicates_removed
            << "\n";
  for (const auto& group : store.groups) {
    std::size_t n = group.entries.size();
    for (const auto& b : group.blocks) n += b.ids.size();
    std::cout << "  /" << int{group.prefix_len} << ": " << n << "\n";
  }
  return 0;
}

struct MatchArgs {
  std::string key;
  std::string store;
  std::string ip;
  std::string protocol;
  bool exhaustive = false;
  bool blind = false;
  unsigned threads = 1;
  bool json = false;
  bool debug = false;
  bool whitelist = false;
};

int RunMatch(const Globals& g, const MatchArgs& a) {
  const ipmatch::Ipv4Addr ip = ipmatch::ParseIpv4(a.ip);
  const cli::LoadedKey key = cli::LoadKey(a.key);
  if (!key.keys) {
    throw Error(ErrorCode::kInvalidOptions,
                "match needs the private key file (.key)");
  }
  const auto store = cli::LoadStore(a.store);
  ipmatch::Protocol protocol = ipmatch::DefaultProtocol(store.scheme);
  if (a.protocol == "sub") {
    protocol = ipmatch::Protocol::kSubtract;
  } else if (a.protocol == "xor") {
    protocol = ipmatch::Protocol::kXor;
  }
  ipmatch::MatchOptions opts;
  opts.exhaustive = a.exhaustive;
  opts.blind = a.blind;
  opts.threads = a.threads;
  opts.debug = a.debug;
  RandomSource rng = MakeRng(g);
  const auto result =
      ipmatch::Match(ip, store, *key.keys, protocol, rng, opts);

  const char* list = a.whitelist ? "whitelist" : "blacklist";
  if (a.json) {
    nlohmann::json j;
    j["ip"] = ip.ToString();
    j["list"] = list;
    j["scheme"] = std::string(ipmatch::StoreSchemeName(store.scheme));
    j["matched"] = result.matched;
    j["entry_id"] = result.entry_id ? nlohmann::json(*result.entry_id)
                                    : nlohmann::json(nullptr);
    j["prefix_len"] = result.prefix_len ? nlohmann::json(*result.prefix_len)
                                        : nlohmann::json(nullptr);
    j["stats"] = {{"target_encryptions", result.stats.target_encryptions},
                  {"homomorphic_ops", result.stats.homomorphic_ops},
                  {"zero_tests", result.stats.zero_tests}};
    if (a.debug) {
      nlohmann::json d = nlohmann::json::array();
      for (const auto& r : result.debug) {
        d.push_back({{"entry_id", r.entry_id},
                     {"prefix_len", r.prefix_len},
                     {"difference", r.difference}});
      }
      j["debug"] = d;
    }
    std::cout << j.dump() << "\n";
  } else {
    if (result.matched) {
      std::cout << "MATCH entry=" << *result.entry_id << " prefix=/"
                << int{*result.prefix_len} << " (" << list << ")\n";
    } else {
      std::cout << "NO-MATCH (" << list << ")\n";
    }
    for (const auto& r : result.debug) {
      std::cerr << "debug: entry " << r.entry_id << " /" << int{r.prefix_len}
                << " difference "
                << (r.difference.empty() ? "?" : r.difference) << "\n";
    }
  }
  return result.matched ? kExitMatch : kExitNoMatch;
}

struct BenchArgs {
  std::string schemes = "all";
  unsigned iterations = 5;
  std::string format = "table";
  unsigned bits = 2048;
  std::string profile = "desk";
};

int RunBench(const Globals& g, const BenchArgs& a) {
  cli::BenchConfig config;
  if (a.schemes != "all") config.schemes = SplitComma(a.schemes);
  config.iterations = a.iterations;
  config.bits = a.bits;
  config.bfv_params = ProfileByName(a.profile);
  config.seed = g.seed;
  const auto rows = cli::RunBench(config);
  cli::WriteHardwareHeader(std::cout, cli::CollectHardware());
  if (a.format == "csv") {
    cli::WriteBenchCsv(std::cout, rows);
  } else {
    cli::WriteBenchTable(std::cout, rows);
  }
  return 0;
}

struct ScaleArgs {
  std::string counts = "50,100,200,400,800";
  std::string scheme = "bfv";
  bool packed = false;
  bool random_prefixes = false;
  std::string format = "table";
  unsigned threads = 1;
  unsigned repeats = 3;
  unsigned bits = 2048;
  std::string profile = "desk";
};

int RunScale(const Globals& g, const ScaleArgs& a) {
  cli::ScaleConfig config;
  config.counts.clear();
  for (const auto& c : SplitComma(a.counts)) {
    try {
      config.counts.push_back(std::stoul(c));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidOptions, "bad count '" + c + "'");
    }
  }
  config.scheme = a.scheme;
  config.packed = a.packed;
  config.random_prefixes = a.random_prefixes;
  config.threads = a.threads;
  config.search_repeats = a.repeats;
  config.bits = a.bits;
  config.bfv_params = ProfileByName(a.profile);
  config.seed = g.seed;
  const auto rows = cli::RunScale(config);
  cli::WriteHardwareHeader(std::cout, cli::CollectHardware());
  std::cout << "# search: exhaustive scan of the whole store, median of "
            << config.search_repeats << " runs\n";
  if (a.format == "csv") {
    cli::WriteScaleCsv(std::cout, rows);
  } else {
    cli::WriteScaleTable(std::cout, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Encrypted IPv4 blacklist matching with homomorphic encryption"};
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--seed", globals.seed,
                 "Deterministic RNG seed; enables insecure test mode")
      ->configurable(false);
  app.fallthrough();

  const std::vector<std::string> key_schemes = [] {
    std::vector<std::string> v;
    for (auto id : phe::kAllSchemes) v.emplace_back(phe::SchemeName(id));
    v.emplace_back("bfv");
    return v;
  }();
  const std::vector<std::string> profiles = {"desk", "paper", "test"};

  KeygenArgs keygen;
  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a key pair");
  keygen_cmd->add_option("--scheme", keygen.scheme, "Scheme name")
      ->required()
      ->check(CLI::IsMember(key_schemes));
  keygen_cmd->add_option("--bits", keygen.bits, "PHE public modulus size")
      ->capture_default_str();
  keygen_cmd->add_option("--profile", keygen.profile, "BFV parameter profile")
      ->check(CLI::IsMember(profiles))
      ->capture_default_str();
  keygen_cmd->add_option("--dj-s", keygen.dj_s, "Damgard-Jurik exponent s")
      ->check(CLI::Range(1, 4))
      ->capture_default_str();
  keygen_cmd->add_option("--benaloh-r", keygen.benaloh_r,
                         "Benaloh block size (prime, decimal)");
  keygen_cmd->add_option("--out", keygen.out,
                         "Output base path; writes <out>.pub and <out>.key")
      ->required();

  auto* blacklist_cmd = app.add_subcommand("blacklist", "Blacklist operations");
  blacklist_cmd->require_subcommand(1);
  EncryptArgs encrypt;
  auto* encrypt_cmd =
      blacklist_cmd->add_subcommand("encrypt", "Encrypt a CIDR list");
  encrypt_cmd->add_option("--pub", encrypt.pub, "Public key file")
      ->required()
      ->check(CLI::ExistingFile);
  encrypt_cmd->add_option("--cidrs", encrypt.cidrs, "One CIDR per line")
      ->required()
      ->check(CLI::ExistingFile);
  encrypt_cmd->add_option("--out", encrypt.out, "Store file to write")
      ->required();
  encrypt_cmd->add_flag("--packed", encrypt.packed,
                        "BFV: pack entries into ciphertext coefficients");

  MatchArgs match;
  auto* match_cmd =
      app.add_subcommand("match", "Test an address against a store");
  match_cmd->add_option("--key", match.key, "Private key file")->required();
  match_cmd->add_option("--store", match.store, "Store file")->required();
  match_cmd->add_option("--ip", match.ip, "IPv4 address")->required();
  match_cmd->add_option("--protocol", match.protocol,
                        "sub or xor (default: from the store scheme)")
      ->check(CLI::IsMember({"sub", "xor"}));
  match_cmd->add_flag("--exhaustive", match.exhaustive,
                      "Test every entry instead of stopping at a match");
  match_cmd->add_flag("--blind", match.blind,
                      "Blind differences before the zero test");
  match_cmd->add_option("--threads", match.threads, "Worker threads")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  match_cmd->add_flag("--json", match.json, "Machine-readable output");
  match_cmd->add_flag("--debug", match.debug,
                      "Show decrypted per-entry differences");
  match_cmd->add_flag("--whitelist", match.whitelist,
                      "Treat the store as a whitelist (same test, labelled)");

  BenchArgs bench;
  auto* bench_cmd =
      app.add_subcommand("bench", "Per-scheme keygen/encrypt/match timings");
  bench_cmd->add_option("--schemes", bench.schemes,
                        "Comma-separated scheme names or 'all'")
      ->capture_default_str();
  bench_cmd->add_option("--iterations", bench.iterations, "Timed iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--format", bench.format, "csv or table")
      ->check(CLI::IsMember({"csv", "table"}))
      ->capture_default_str();
  bench_cmd->add_option("--bits", bench.bits, "PHE public modulus size")
      ->capture_default_str();
  bench_cmd->add_option("--profile", bench.profile, "BFV parameter profile")
      ->check(CLI::IsMember(profiles))
      ->capture_default_str();

  ScaleArgs scale;
  auto* scale_cmd = bench_cmd->add_subcommand(
      "scale", "Store build and exhaustive search time against store size");
  scale_cmd->add_option("--counts", scale.counts, "Comma-separated sizes")
      ->capture_default_str();
  scale_cmd->add_option("--scheme", scale.scheme, "Scheme name")
      ->check(CLI::IsMember(key_schemes))
      ->capture_default_str();
  scale_cmd->add_flag("--packed", scale.packed, "BFV coefficient packing");
  scale_cmd->add_flag("--random-prefixes", scale.random_prefixes,
                      "Prefix lengths in [8, 32] instead of /24");
  scale_cmd->add_option("--format", scale.format, "csv or table")
      ->check(CLI::IsMember({"csv", "table"}))
      ->capture_default_str();
  scale_cmd->add_option("--threads", scale.threads, "Worker threads")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  scale_cmd->add_option("--repeats", scale.repeats, "Searches per size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scale_cmd->add_option("--bits", scale.bits, "PHE public modulus size")
      ->capture_default_str();
  scale_cmd->add_option("--profile", scale.profile, "BFV parameter profile")
      ->check(CLI::IsMember(profiles))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*keygen_cmd) return RunKeygen(globals, keygen);
    if (*encrypt_cmd) return RunBlacklistEncrypt(globals, encrypt);
    if (*match_cmd) return RunMatch(globals, match);
    if (*scale_cmd) return RunScale(globals, scale);
    if (*bench_cmd) return RunBench(globals, bench);
  } catch (const Error& e) {
    std::cerr << "error (" << ErrorCodeName(e.code()) << "): " << e.what()
              << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
