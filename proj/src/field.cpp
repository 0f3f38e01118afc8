#include "nodal/field.hpp"

#include <ostream>

namespace nodal {

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

void Fp::set_characteristic(uint32_t p) {
  if (p > 2147483647u || !is_prime(p))
    throw std::invalid_argument("characteristic must be a prime below 2^31, got " +
                                std::to_string(p));
  p_ = p;
}

Fp Fp::pow(uint64_t e) const {
  Fp r(1), b = *this;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

Fp Fp::inv() const {
  if (v_ == 0) throw std::domain_error("division by zero in F_p");
  return pow(p_ - 2);
}

std::ostream& operator<<(std::ostream& os, Fp x) { return os << x.centered(); }

}  // namespace nodal
