#include "trisys/fp.hpp"

namespace trisys {

int32_t fp_inv(int64_t a, int64_t p) {
  a = fp_norm(a, p);
  if (a == 0) throw std::domain_error("fp_inv: zero has no inverse");
  int64_t t = 0, new_t = 1;
  int64_t r = p, new_r = a;
  while (new_r != 0) {
    int64_t q = r / new_r;
    int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  return static_cast<int32_t>(fp_norm(t, p));
}

bool is_odd_prime(int64_t p) {
  if (p < 3 || p % 2 == 0) return false;
  for (int64_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

void require_odd_prime(int64_t p) {
  if (!is_odd_prime(p))
    throw std::invalid_argument("modulus must be an odd prime >= 3, got " + std::to_string(p));
}

}  // namespace trisys
