#include <gtest/gtest.h>

#include <sys/stat.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helb/bench.h"
#include "helb/error.h"
#include "helb/keyfile.h"
#include "helb/store_file.h"

namespace helb::cli {
namespace {

namespace fs = std::filesystem;
using ipmatch::KeyMaterial;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

KeyMaterial Keys(std::string_view scheme, std::uint64_t seed) {
  auto rng = RandomSource::Seeded(seed);
  phe::KeygenOptions opts;
  opts.test_mode = true;
  const unsigned bits = scheme == "naccache-stern" ? 384 : 256;
  return GenerateKeys(scheme, bits, bfv::TestProfile(), opts, rng);
}

fs::path TempDir() {
  const fs::path dir = fs::temp_directory_path() /
                       ("helb_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

class PerScheme : public ::testing::TestWithParam<std::string> {};

TEST_P(PerScheme, KeyTextRoundTrip) {
  const KeyMaterial keys = Keys(GetParam(), 1);
  const std::string priv = SerializePrivateKey(keys);
  const std::string pub = SerializePublicKey(ipmatch::PublicPart(keys));
  EXPECT_EQ(priv.rfind("HELB-KEY v1\nscheme = " + GetParam() + "\n", 0), 0u);
  const LoadedKey lp = ParseKey(priv);
  ASSERT_TRUE(lp.keys.has_value());
  EXPECT_EQ(lp.scheme, GetParam());
  EXPECT_EQ(SerializePrivateKey(*lp.keys), priv);
  const LoadedKey lq = ParseKey(pub);
  EXPECT_FALSE(lq.keys.has_value());
  EXPECT_EQ(SerializePublicKey(lq.pub), pub);
  EXPECT_EQ(KeySchemeName(lq.pub), GetParam());
  // The public file is a prefix of the private one.
  EXPECT_EQ(priv.rfind(pub, 0), 0u);
}

TEST_P(PerScheme, StoreRoundTripAndMatch) {
  auto rng = RandomSource::Seeded(2);
  const KeyMaterial keys = Keys(GetParam(), 3);
  const std::vector<ipmatch::CidrEntry> list = {
      ipmatch::ParseCidr("10.0.0.0/8").entry,
      ipmatch::ParseCidr("192.168.7.0/24").entry,
      ipmatch::ParseCidr("203.0.113.9/32").entry};
  // Loaded keys must work against a store built from the original ones.
  const LoadedKey loaded = ParseKey(SerializePrivateKey(keys));
  for (bool packed : {false, true}) {
    if (packed && GetParam() != "bfv") continue;
    const auto store =
        ipmatch::BuildStore(list, ipmatch::PublicPart(keys), rng, {packed});
    const auto bytes = SerializeStore(store);
    ASSERT_GE(bytes.size(), 10u);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "HELB");
    EXPECT_EQ(bytes[4], kStoreVersion);
    EXPECT_EQ(bytes[5], static_cast<std::uint8_t>(store.scheme));
    const auto parsed = ParseStore(bytes);
    EXPECT_EQ(SerializeStore(parsed), bytes);
    EXPECT_EQ(parsed.entry_count(), 3u);
    const auto proto = ipmatch::DefaultProtocol(parsed.scheme);
    const auto hit = ipmatch::Match(ipmatch::ParseIpv4("192.168.7.200"),
                                    parsed, *loaded.keys, proto, rng);
    EXPECT_TRUE(hit.matched);
    EXPECT_EQ(*hit.entry_id, 1u);
    EXPECT_FALSE(ipmatch::Match(ipmatch::ParseIpv4("192.168.8.1"), parsed,
                                *loaded.keys, proto, rng)
                     .matched);
  }
}

INSTANTIATE_TEST_SUITE_P(Schemes, PerScheme,
                         ::testing::ValuesIn(BenchSchemeNames()),
                         [](const auto& info) {
                           std::string n = info.param;
                           std::erase(n, '-');
                           return n;
                         });

TEST(KeyFileTest, WritesPermissions) {
  const fs::path dir = TempDir();
  const auto [pub, priv] = WriteKeyFiles(dir / "k", Keys("paillier", 4));
  EXPECT_EQ(pub.filename(), "k.pub");
  EXPECT_EQ(priv.filename(), "k.key");
  struct stat st {};
  ASSERT_EQ(::stat(priv.c_str(), &st), 0);
  EXPECT_EQ(st.st_mode & 0777, 0600u);
  EXPECT_TRUE(LoadKey(priv).keys.has_value());
  EXPECT_FALSE(LoadKey(pub).keys.has_value());
  fs::remove_all(dir);
}

TEST(KeyFileTest, RejectsMalformedText) {
  const std::string good = SerializePublicKey(
      ipmatch::PublicPart(Keys("paillier", 5)));
  EXPECT_EQ(CodeOf([] { ParseKey("HELB-KEY v2\nscheme = paillier\n"); }),
            ErrorCode::kFormat);
  EXPECT_EQ(CodeOf([&] { ParseKey(good + "n = 3\n"); }), ErrorCode::kFormat);
  EXPECT_EQ(CodeOf([&] { ParseKey(good + "bogus = 1\n"); }),
            ErrorCode::kFormat);
  EXPECT_EQ(CodeOf([] { ParseKey("HELB-KEY v1\nscheme = rot13\n"); }),
            ErrorCode::kFormat);
  EXPECT_EQ(CodeOf([] { ParseKey("HELB-KEY v1\nscheme = paillier\nn = zz\n"); }),
            ErrorCode::kFormat);
}

TEST(KeyFileTest, BfvParamsValidatedOnLoad) {
  std::string text = SerializePublicKey(ipmatch::PublicPart(Keys("bfv", 6)));
  const std::string from = "plaintext_mod = 35184372744193";
  const auto pos = text.find(from);
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, from.size(), "plaintext_mod = 35184372744195");
  EXPECT_EQ(CodeOf([&] { ParseKey(text); }), ErrorCode::kInvalidParams);
}

TEST(StoreFileTest, RejectsCorruption) {
  auto rng = RandomSource::Seeded(7);
  const KeyMaterial keys = Keys("paillier", 8);
  const std::vector<ipmatch::CidrEntry> list = {
      ipmatch::ParseCidr("10.0.0.0/8").entry,
      ipmatch::ParseCidr("10.1.0.0/16").entry};
  const auto bytes =
      SerializeStore(ipmatch::BuildStore(list, ipmatch::PublicPart(keys), rng));
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_EQ(CodeOf([&] { ParseStore(bad); }), ErrorCode::kFormat);
  bad = bytes;
  bad[4] = 2;
  EXPECT_EQ(CodeOf([&] { ParseStore(bad); }), ErrorCode::kFormat);
  bad = bytes;
  bad[5] = 9;
  EXPECT_EQ(CodeOf([&] { ParseStore(bad); }), ErrorCode::kFormat);
  bad = bytes;
  bad.push_back(0);
  EXPECT_EQ(CodeOf([&] { ParseStore(bad); }), ErrorCode::kFormat);
  for (std::size_t cut : {std::size_t{3}, std::size_t{9}, bytes.size() - 1}) {
    bad.assign(bytes.begin(), bytes.begin() + cut);
    EXPECT_EQ(CodeOf([&] { ParseStore(bad); }), ErrorCode::kFormat) << cut;
  }
  // Groups out of order: swap the prefix bytes of the two groups.
  bad = bytes;
  const std::size_t first_prefix = 10;
  ASSERT_EQ(bad[first_prefix], 16);
  bad[first_prefix] = 4;
  EXPECT_EQ(CodeOf([&] { ParseStore(bad); }), ErrorCode::kFormat);
}

TEST(StoreFileTest, SaveAndLoad) {
  auto rng = RandomSource::Seeded(9);
  const KeyMaterial keys = Keys("goldwasser-micali", 10);
  const std::vector<ipmatch::CidrEntry> list = {
      ipmatch::ParseCidr("1.2.3.0/24").entry};
  const auto store =
      ipmatch::BuildStore(list, ipmatch::PublicPart(keys), rng);
  const fs::path dir = TempDir();
  SaveStore(dir / "s.bin", store);
  EXPECT_EQ(SerializeStore(LoadStore(dir / "s.bin")), SerializeStore(store));
  EXPECT_EQ(CodeOf([&] { LoadStore(dir / "missing.bin"); }), ErrorCode::kIo);
  fs::remove_all(dir);
}

TEST(BenchTest, RowsAndCsv) {
  BenchConfig config;
  config.iterations = 2;
  config.bits = 512;
  config.bfv_params = bfv::TestProfile();
  config.seed = 1;
  const auto rows = RunBench(config);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0].scheme, "BFV");
  EXPECT_EQ(rows[1].scheme, "Paillier");
  for (const auto& r : rows) {
    EXPECT_EQ(r.iterations, 2u);
    for (const Timing& t : {r.keypair, r.encrypt, r.op_decrypt}) {
      EXPECT_TRUE(std::isfinite(t.mean_ms));
      EXPECT_GE(t.mean_ms, 0);
      EXPECT_GE(t.stddev_ms, 0);
    }
  }
  std::ostringstream csv;
  WriteBenchCsv(csv, rows);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line,
            "scheme,iterations,keypair_ms,keypair_sd_ms,encrypt_ms,"
            "encrypt_sd_ms,op_decrypt_ms,op_decrypt_sd_ms");
  int n = 0;
  while (std::getline(lines, line)) {
    ++n;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7) << line;
  }
  EXPECT_EQ(n, 7);
  std::ostringstream table;
  WriteBenchTable(table, rows);
  EXPECT_NE(table.str().find("Naccache-Stern"), std::string::npos);

  config.schemes = {"rsa"};
  EXPECT_EQ(CodeOf([&] { RunBench(config); }), ErrorCode::kInvalidOptions);
  config.schemes = {"bfv"};
  config.iterations = 0;
  EXPECT_EQ(CodeOf([&] { RunBench(config); }), ErrorCode::kInvalidOptions);
}

TEST(BenchTest, ScaleRows) {
  ScaleConfig config;
  config.counts = {5, 10, 20};
  config.bfv_params = bfv::TestProfile();
  config.search_repeats = 1;
  config.seed = 2;
  const auto rows = RunScale(config);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(rows[i].n_addresses, config.counts[i]);
    EXPECT_GT(rows[i].encrypt_total_s, 0);
    EXPECT_GT(rows[i].search_total_s, 0);
  }
  std::ostringstream csv;
  WriteScaleCsv(csv, rows);
  EXPECT_EQ(csv.str().rfind("n_addresses,encrypt_total_s,search_total_s\n", 0),
            0u);
  config.scheme = "paillier";
  config.packed = true;
  EXPECT_EQ(CodeOf([&] { RunScale(config); }), ErrorCode::kInvalidOptions);
}

TEST(BenchTest, LinearFit) {
  EXPECT_NEAR(LinearFitR2({1, 2, 3, 4}, {2, 4, 6, 8}), 1.0, 1e-12);
  EXPECT_NEAR(LinearFitR2({1, 2, 3, 4}, {3, 5, 7, 9}), 1.0, 1e-12);
  // x = 1..4, y = 1, 3, 2, 4: slope 0.8, SSres 1.8, SStot 5.
  EXPECT_NEAR(LinearFitR2({1, 2, 3, 4}, {1, 3, 2, 4}), 1.0 - 1.8 / 5.0, 1e-12);
}

TEST(HardwareTest, HeaderLines) {
  const HardwareInfo hw = CollectHardware();
  EXPECT_GT(hw.logical_cores, 0u);
  EXPECT_FALSE(hw.compiler.empty());
  std::ostringstream out;
  WriteHardwareHeader(out, hw);
  std::istringstream in(out.str());
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    EXPECT_EQ(line.rfind("# ", 0), 0u) << line;
  }
  EXPECT_GE(n, 6);
  EXPECT_NE(out.str().find("t3.medium"), std::string::npos);
  EXPECT_NE(out.str().find("cpu"), std::string::npos);
}

}  // namespace
}  // namespace helb::cli
