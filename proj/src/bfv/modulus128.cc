#include "modulus128.h"

#include "helb/error.h"

namespace helb::bfv {

BigUint ToBig(u128 v) {
  BigUint hi = static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64));
  BigUint lo = static_cast<unsigned long>(static_cast<std::uint64_t>(v));
  return (hi << 64) + lo;
}

u128 FromBig(const BigUint& v) {
  if (v < 0 || BitLength(v) > 128) {
    throw Error(ErrorCode::kInvalidParams, "value exceeds 128 bits");
  }
  BigUint lo_part = v & BigUint("ffffffffffffffff", 16);
  BigUint hi_part = v >> 64;
  return (static_cast<u128>(hi_part.get_ui()) << 64) | lo_part.get_ui();
}

Modulus128::Modulus128(u128 q) : q_(q) {
  if ((q & 1) == 0 || q < 3 || (q >> 126) != 0) {
    throw Error(ErrorCode::kInvalidParams,
                "modulus must be odd and below 2^126");
  }
  // Newton iteration doubles the number of correct low bits each step.
  u128 inv = q;
  for (int i = 0; i < 7; ++i) inv *= 2 - q * inv;
  q_neg_inv_ = -inv;
  BigUint r2 = 1;
  r2 <<= 256;
  r2_ = FromBig(r2 % ToBig(q));
}

u128 Modulus128::Pow(u128 base, u128 exp) const {
  u128 result = ToMont(1);
  u128 b = ToMont(base % q_);
  while (exp != 0) {
    if (exp & 1) result = MontMul(result, b);
    b = MontMul(b, b);
    exp >>= 1;
  }
  return MontMul(result, 1);
}

}  // namespace helb::bfv
