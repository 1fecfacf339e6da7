#ifndef HELB_SRC_BFV_NTT_H_
#define HELB_SRC_BFV_NTT_H_

#include <cstddef>
#include <span>
#include <vector>

#include "modulus128.h"

namespace helb::bfv {

// Negacyclic NTT over Z_q[x]/(x^n + 1); requires q = 1 mod 2n. Forward is
// Cooley-Tukey with bit-reversed powers of a primitive 2n-th root psi,
// inverse is Gentleman-Sande, so no separate bit-reversal pass is needed.
class NttTables {
 public:
  NttTables(const Modulus128& q, std::size_t n);

  void Forward(std::span<u128> a) const;
  void Inverse(std::span<u128> a) const;

  std::size_t size() const { return n_; }
  u128 psi() const { return psi_; }

 private:
  const Modulus128& q_;
  std::size_t n_;
  u128 psi_;
  std::vector<u128> psi_rev_mont_;      // psi^bitrev(i), Montgomery form
  std::vector<u128> inv_psi_rev_mont_;  // psi^-bitrev(i), Montgomery form
  u128 inv_n_mont_;
};

// Negacyclic product without NTT; O(n^2). Used when q is not NTT-friendly.
std::vector<u128> NegacyclicMulSchoolbook(const Modulus128& q,
                                          std::span<const u128> a,
                                          std::span<const u128> b);

}  // namespace helb::bfv

#endif  // HELB_SRC_BFV_NTT_H_
