#include <cmath>
#include <sstream>

#include "helb/bfv.h"

namespace helb::bfv {

namespace {

constexpr std::uint32_t kMaxRingDim = 1u << 16;
// Largest q the 128-bit Montgomery arithmetic accepts.
constexpr std::size_t kMaxCiphertextBits = 126;
constexpr std::size_t kMaxPlaintextBits = 63;
constexpr std::size_t kMinRatioBits = 20;

const char* kDefaultQ = "1267650600228229401496702713857";
const char* kDefaultT = "35184372744193";

}  // namespace

BigUint DefaultCiphertextModulus() { return BigUint(kDefaultQ); }

BfvParams DeskProfile() {
  return {4096, BigUint(kDefaultT), DefaultCiphertextModulus(), 3.2};
}

BfvParams PaperProfile() {
  return {16384, BigUint(kDefaultT), DefaultCiphertextModulus(), 3.2};
}

BfvParams TestProfile() {
  return {256, BigUint(kDefaultT), DefaultCiphertextModulus(), 3.2};
}

bool ParamReport::Has(ParamViolation kind) const {
  for (const auto& issue : issues) {
    if (issue.kind == kind) return true;
  }
  return false;
}

std::string ParamReport::Summary() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) out << "; ";
    out << issues[i].detail;
  }
  return out.str();
}

ParamReport ValidateParams(const BfvParams& p) {
  ParamReport report;
  auto fail = [&report](ParamViolation kind, std::string detail) {
    report.issues.push_back({kind, std::move(detail)});
  };

  const std::uint32_t n = p.ring_dim;
  const bool n_ok = n >= 2 && (n & (n - 1)) == 0;
  if (!n_ok) {
    fail(ParamViolation::kRingDimNotPowerOfTwo,
         "ring_dim " + std::to_string(n) + " is not a power of two >= 2");
  } else if (n > kMaxRingDim) {
    fail(ParamViolation::kUnsupportedSize,
         "ring_dim above " + std::to_string(kMaxRingDim));
  }

  const BigUint& t = p.plaintext_mod;
  if (!IsProbablePrime(t)) {
    fail(ParamViolation::kPlaintextNotPrime,
         "plaintext modulus " + t.get_str() + " is not prime");
  }
  if (n_ok) {
    BigUint two_n = 2 * static_cast<unsigned long>(n);
    if (t < 2 || (t - 1) % two_n != 0) {
      fail(ParamViolation::kPlaintextNotNttFriendly,
           "plaintext modulus is not 1 mod " + two_n.get_str());
    }
  }
  if (BitLength(t) > kMaxPlaintextBits) {
    fail(ParamViolation::kUnsupportedSize, "plaintext modulus above 2^63");
  }

  const BigUint& q = p.ciphertext_mod;
  if (!IsProbablePrime(q)) {
    fail(ParamViolation::kCiphertextNotPrime,
         "ciphertext modulus " + q.get_str() + " is not prime");
  }
  if (BitLength(q) > kMaxCiphertextBits) {
    fail(ParamViolation::kUnsupportedSize, "ciphertext modulus above 2^126");
  }
  if (t <= 0 || q / (t > 0 ? t : BigUint(1)) <= (BigUint(1) << kMinRatioBits)) {
    fail(ParamViolation::kModulusRatioTooSmall, "q / t must exceed 2^20");
  }

  if (!(p.err_stddev > 0.0) || !std::isfinite(p.err_stddev)) {
    fail(ParamViolation::kStddevNotPositive, "error stddev must be > 0");
  }
  return report;
}

}  // namespace helb::bfv
