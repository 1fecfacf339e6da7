#ifndef HELB_BENCH_H_
#define HELB_BENCH_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "helb/bfv.h"
#include "helb/ipmatch.h"

namespace helb::cli {

inline constexpr std::string_view kTimingNote =
    "Absolute timings are hardware-specific and are not comparable with "
    "figures measured on other machines (for example an AWS t3.medium "
    "instance); only relative ordering and scaling trends are meaningful.";

struct HardwareInfo {
  std::string cpu_model;
  unsigned logical_cores = 0;
  std::string os;
  std::string compiler;
  std::string build_type;
  std::string timestamp_utc;
};

HardwareInfo CollectHardware();
// "# key: value" lines followed by the timing note, also '#'-prefixed.
void WriteHardwareHeader(std::ostream& out, const HardwareInfo& hw);

struct Timing {
  double mean_ms = 0;
  double stddev_ms = 0;
};

// One row per scheme, three timed phases of a single IP match:
// keypair (key and context setup), encrypt (target address and blacklist
// network), op_decrypt (homomorphic subtraction or xor plus the zero test).
struct BenchRow {
  std::string scheme;
  Timing keypair, encrypt, op_decrypt;
  unsigned iterations = 0;
};

// The seven rows in output order: BFV then the six PHE schemes.
std::vector<std::string> BenchSchemeNames();

struct BenchConfig {
  std::vector<std::string> schemes = BenchSchemeNames();
  unsigned iterations = 5;
  // Public modulus size for the PHE schemes.
  unsigned bits = 2048;
  bfv::BfvParams bfv_params = bfv::DeskProfile();
  // Set: deterministic RandomSource and test-mode key generation.
  std::optional<std::uint64_t> seed;
};

// One untimed warm-up iteration precedes the measured ones.
std::vector<BenchRow> RunBench(const BenchConfig& config);

void WriteBenchCsv(std::ostream& out, const std::vector<BenchRow>& rows);
void WriteBenchTable(std::ostream& out, const std::vector<BenchRow>& rows);

struct ScaleRow {
  std::size_t n_addresses = 0;
  double encrypt_total_s = 0;
  double search_total_s = 0;
};

inline const std::vector<std::size_t> kDefaultScaleCounts = {50, 100, 200,
                                                             400, 800};

struct ScaleConfig {
  std::vector<std::size_t> counts = kDefaultScaleCounts;
  std::string scheme = "bfv";
  bool packed = false;
  // Draw prefix lengths in [8, 32] instead of fixing /24.
  bool random_prefixes = false;
  unsigned bits = 2048;
  bfv::BfvParams bfv_params = bfv::DeskProfile();
  unsigned threads = 1;
  // Search time is the median of this many exhaustive searches.
  unsigned search_repeats = 3;
  std::optional<std::uint64_t> seed;
};

// For each count: random CIDRs, time BuildStore, then time an exhaustive
// search for an address inside the last entry. Key generation is untimed.
std::vector<ScaleRow> RunScale(const ScaleConfig& config);

void WriteScaleCsv(std::ostream& out, const std::vector<ScaleRow>& rows);
void WriteScaleTable(std::ostream& out, const std::vector<ScaleRow>& rows);

// Coefficient of determination of the least-squares line y = a + b x.
double LinearFitR2(const std::vector<double>& x, const std::vector<double>& y);

// Key generation shared by the CLI and the harness. `scheme` is a PHE name or
// "bfv"; PHE keys use `bits`, BFV uses `bfv_params`.
ipmatch::KeyMaterial GenerateKeys(std::string_view scheme, unsigned bits,
                                  const bfv::BfvParams& bfv_params,
                                  const phe::KeygenOptions& opts,
                                  RandomSource& rng);

}  // namespace helb::cli

#endif  // HELB_BENCH_H_
