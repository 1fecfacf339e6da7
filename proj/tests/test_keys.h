#ifndef HELB_TESTS_TEST_KEYS_H_
#define HELB_TESTS_TEST_KEYS_H_

#include <optional>

#include "helb/phe.h"

namespace testing_keys {

// Benaloh block small enough for the brute-force decrypt path.
inline const helb::BigUint kToyBenalohBlock = 1009;

// Test-mode keys. `toy_benaloh` swaps the default 2^33-sized block for a
// small prime so that full decryption is available.
inline helb::phe::KeyPair Make(helb::phe::SchemeId id, unsigned bits,
                               helb::RandomSource& rng,
                               bool toy_benaloh = true) {
  helb::phe::KeygenOptions opts;
  opts.test_mode = true;
  if (toy_benaloh && id == helb::phe::SchemeId::kBenaloh) {
    opts.benaloh_block = kToyBenalohBlock;
  }
  return helb::phe::KeyGen(id, bits, opts, rng);
}

}  // namespace testing_keys

#endif  // HELB_TESTS_TEST_KEYS_H_
