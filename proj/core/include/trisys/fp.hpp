#pragma once

#include <cstdint>
#include <stdexcept>

namespace trisys {

// Arithmetic in GF(p) for a small odd prime p. Residues live in [0, p).
// p stays well below 2^15 in practice, so int32 products never overflow.

inline int64_t fp_norm(int64_t x, int64_t p) {
  x %= p;
  return x < 0 ? x + p : x;
}

inline int32_t fp_add(int32_t a, int32_t b, int64_t p) {
  int32_t s = a + b;
  return s >= p ? s - static_cast<int32_t>(p) : s;
}

inline int32_t fp_sub(int32_t a, int32_t b, int64_t p) {
  int32_t s = a - b;
  return s < 0 ? s + static_cast<int32_t>(p) : s;
}

inline int32_t fp_mul(int32_t a, int32_t b, int64_t p) {
  return static_cast<int32_t>((static_cast<int64_t>(a) * b) % p);
}

inline int32_t fp_neg(int32_t a, int64_t p) {
  return a == 0 ? 0 : static_cast<int32_t>(p) - a;
}

// Extended Euclid. Throws on a == 0 mod p.
int32_t fp_inv(int64_t a, int64_t p);

// Inverse of 2: always defined since p is odd.
inline int32_t fp_half(int64_t p) { return static_cast<int32_t>((p + 1) / 2); }

bool is_odd_prime(int64_t p);

// Throws std::invalid_argument unless p is an odd prime >= 3.
void require_odd_prime(int64_t p);

}  // namespace trisys
