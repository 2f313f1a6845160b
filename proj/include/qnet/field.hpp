#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qnet {

using i64 = std::int64_t;

/// Primality by trial division. Intended for field moduli, which stay small
/// enough (up to ~10^7 in practice) that this is never a bottleneck.
inline bool is_prime(i64 d) {
  if (d < 2) return false;
  if (d % 2 == 0) return d == 2;
  for (i64 p = 3; p * p <= d; p += 2)
    if (d % p == 0) return false;
  return true;
}

/// x reduced into [0, d).
inline i64 mod_pos(i64 x, i64 d) {
  i64 r = x % d;
  return r < 0 ? r + d : r;
}

/// Arithmetic in the prime field F_d. All element values are kept in [0, d).
class Field {
 public:
  explicit Field(i64 d) : d_(d) {
    if (!is_prime(d))
      throw std::invalid_argument("field modulus must be prime, got " + std::to_string(d));
  }

  i64 modulus() const { return d_; }

  i64 reduce(i64 x) const { return mod_pos(x, d_); }
  i64 add(i64 a, i64 b) const { return reduce(a + b); }
  i64 sub(i64 a, i64 b) const { return reduce(a - b); }
  i64 mul(i64 a, i64 b) const { return reduce(reduce(a) * reduce(b)); }
  i64 neg(i64 a) const { return reduce(-a); }

  i64 pow(i64 a, i64 e) const {
    a = reduce(a);
    e = mod_pos(e, d_ - 1);  // Fermat: a^(d-1) = 1 for a != 0
    i64 r = 1;
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  i64 inv(i64 a) const {
    a = reduce(a);
    if (a == 0) throw std::domain_error("division by zero in F_" + std::to_string(d_));
    return pow(a, d_ - 2);
  }

  i64 div(i64 a, i64 b) const { return mul(a, inv(b)); }

 private:
  i64 d_;
};

}  // namespace qnet
