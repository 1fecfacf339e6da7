#include "ntt.h"

#include <bit>

#include "helb/error.h"

namespace helb::bfv {

namespace {

std::size_t BitReverse(std::size_t x, int bits) {
  std::size_t out = 0;
  for (int i = 0; i < bits; ++i) {
    out = (out << 1) | (x & 1);
    x >>= 1;
  }
  return out;
}

}  // namespace

NttTables::NttTables(const Modulus128& q, std::size_t n) : q_(q), n_(n) {
  const u128 qv = q.value();
  if (n < 2 || !std::has_single_bit(n) || (qv - 1) % (2 * n) != 0) {
    throw Error(ErrorCode::kInvalidParams, "q is not NTT-friendly for n");
  }
  // A quadratic non-residue g gives psi = g^((q-1)/2n) with psi^n = -1.
  const u128 exponent = (qv - 1) / (2 * n);
  psi_ = 0;
  for (u128 g = 2;; ++g) {
    if (q.Pow(g, (qv - 1) / 2) == qv - 1) {
      psi_ = q.Pow(g, exponent);
      break;
    }
  }
  const int log_n = std::countr_zero(n);
  const u128 inv_psi = q.Pow(psi_, qv - 2);
  psi_rev_mont_.resize(n);
  inv_psi_rev_mont_.resize(n);
  u128 power = 1, inv_power = 1;
  std::vector<u128> powers(n), inv_powers(n);
  for (std::size_t i = 0; i < n; ++i) {
    powers[i] = power;
    inv_powers[i] = inv_power;
    power = q.Mul(power, psi_);
    inv_power = q.Mul(inv_power, inv_psi);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = BitReverse(i, log_n);
    psi_rev_mont_[i] = q.ToMont(powers[r]);
    inv_psi_rev_mont_[i] = q.ToMont(inv_powers[r]);
  }
  inv_n_mont_ = q.ToMont(q.Pow(static_cast<u128>(n), qv - 2));
}

void NttTables::Forward(std::span<u128> a) const {
  std::size_t t = n_;
  for (std::size_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j1 = 2 * i * t;
      const u128 w = psi_rev_mont_[m + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const u128 u = a[j];
        const u128 v = q_.MontMul(a[j + t], w);
        a[j] = q_.Add(u, v);
        a[j + t] = q_.Sub(u, v);
      }
    }
  }
}

void NttTables::Inverse(std::span<u128> a) const {
  std::size_t t = 1;
  for (std::size_t m = n_; m > 1; m >>= 1) {
    const std::size_t h = m >> 1;
    std::size_t j1 = 0;
    for (std::size_t i = 0; i < h; ++i) {
      const u128 w = inv_psi_rev_mont_[h + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const u128 u = a[j];
        const u128 v = a[j + t];
        a[j] = q_.Add(u, v);
        a[j + t] = q_.MontMul(q_.Sub(u, v), w);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (auto& x : a) x = q_.MontMul(x, inv_n_mont_);
}

std::vector<u128> NegacyclicMulSchoolbook(const Modulus128& q,
                                          std::span<const u128> a,
                                          std::span<const u128> b) {
  const std::size_t n = a.size();
  std::vector<u128> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const u128 prod = q.Mul(a[i], b[j]);
      const std::size_t k = i + j;
      if (k < n) {
        out[k] = q.Add(out[k], prod);
      } else {
        out[k - n] = q.Sub(out[k - n], prod);  // x^n = -1
      }
    }
  }
  return out;
}

}  // namespace helb::bfv
