// Arithmetic modulo an odd q < 2^126 held in unsigned __int128.
#ifndef HELB_SRC_BFV_MODULUS128_H_
#define HELB_SRC_BFV_MODULUS128_H_

#include <cstdint>

#include "helb/numtheory.h"

namespace helb::bfv {

using u128 = unsigned __int128;
using i128 = __int128;

struct Wide {
  u128 hi, lo;
};

inline Wide MulWide(u128 a, u128 b) {
  const u128 mask = ~std::uint64_t{0};
  const u128 a0 = a & mask, a1 = a >> 64;
  const u128 b0 = b & mask, b1 = b >> 64;
  const u128 p00 = a0 * b0, p01 = a0 * b1, p10 = a1 * b0, p11 = a1 * b1;
  const u128 mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
  return {p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64),
          (mid << 64) | (p00 & mask)};
}

BigUint ToBig(u128 v);
// Throws kInvalidParams if v does not fit in 128 bits.
u128 FromBig(const BigUint& v);

class Modulus128 {
 public:
  explicit Modulus128(u128 q);

  u128 value() const { return q_; }

  u128 Add(u128 a, u128 b) const {
    u128 s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  u128 Sub(u128 a, u128 b) const { return a >= b ? a - b : a + q_ - b; }
  u128 Neg(u128 a) const { return a == 0 ? 0 : q_ - a; }

  // a * b * 2^-128 mod q, inputs < q.
  u128 MontMul(u128 a, u128 b) const {
    const Wide t = MulWide(a, b);
    const u128 m = t.lo * q_neg_inv_;
    const Wide mq = MulWide(m, q_);
    // t.lo + mq.lo = 0 mod 2^128; it carries unless both are zero.
    const u128 carry = t.lo != 0 ? 1 : 0;
    u128 r = t.hi + mq.hi + carry;
    return r >= q_ ? r - q_ : r;
  }
  u128 ToMont(u128 a) const { return MontMul(a, r2_); }
  u128 Mul(u128 a, u128 b) const { return MontMul(MontMul(a, b), r2_); }
  u128 Pow(u128 base, u128 exp) const;

  // a mod q for a signed value with |a| < q.
  u128 FromSigned(i128 a) const {
    return a < 0 ? q_ - static_cast<u128>(-a) : static_cast<u128>(a);
  }
  // Representative in (-q/2, q/2].
  i128 Centered(u128 a) const {
    return a > (q_ >> 1) ? -static_cast<i128>(q_ - a) : static_cast<i128>(a);
  }

 private:
  u128 q_;
  u128 q_neg_inv_;  // -q^-1 mod 2^128
  u128 r2_;         // 2^256 mod q
};

}  // namespace helb::bfv

#endif  // HELB_SRC_BFV_MODULUS128_H_
