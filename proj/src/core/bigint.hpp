#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>

namespace tw {

using BigInt = mpz_class;

inline BigInt bigint_pow(std::uint64_t base, std::uint64_t exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

inline std::string to_decimal(const BigInt& v) { return v.get_str(10); }

inline BigInt from_decimal(const std::string& s) { return BigInt(s, 10); }

// Exact element of Z[sqrt(w)]: a + b*sqrt(w). Used to compare lambda=1/2
// tilted quantities without floating point (W^(m/2) = W^(m/2) or W^((m-1)/2)*sqrt(W)).
struct RootInt {
  BigInt a, b;
  std::uint64_t w = 2;

  RootInt() = default;
  explicit RootInt(std::uint64_t base) : a(0), b(0), w(base) {}
  RootInt(BigInt a_, BigInt b_, std::uint64_t w_) : a(std::move(a_)), b(std::move(b_)), w(w_) {}

  RootInt& operator+=(const RootInt& o) {
    a += o.a;
    b += o.b;
    return *this;
  }
  friend RootInt operator+(RootInt x, const RootInt& y) { return x += y; }
  friend RootInt operator*(const RootInt& x, const RootInt& y) {
    RootInt r(x.w);
    r.a = x.a * y.a + BigInt((long)x.w) * x.b * y.b;
    r.b = x.a * y.b + x.b * y.a;
    return r;
  }
  friend bool operator==(const RootInt& x, const RootInt& y) {
    return x.a == y.a && x.b == y.b;
  }

  // sign of a + b*sqrt(w)
  int sign() const {
    int sa = mpz_sgn(a.get_mpz_t());
    int sb = mpz_sgn(b.get_mpz_t());
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: compare a^2 with w*b^2
    BigInt a2 = a * a, wb2 = BigInt((long)w) * b * b;
    int c = cmp(a2, wb2);
    if (c == 0) return 0;  // only possible when w is a perfect square
    return (c > 0) ? sa : sb;
  }

  double to_double() const { return a.get_d() + b.get_d() * std::sqrt((double)w); }
};

inline bool operator<=(const RootInt& x, const RootInt& y) {
  RootInt d(y.w);
  d.a = y.a - x.a;
  d.b = y.b - x.b;
  return d.sign() >= 0;
}

// W^(m/2) as an element of Z[sqrt(W)] for integer m >= 0.
inline RootInt half_power(std::uint64_t w, std::uint64_t m) {
  RootInt r(w);
  if (m % 2 == 0) {
    r.a = bigint_pow(w, m / 2);
  } else {
    r.b = bigint_pow(w, m / 2);
  }
  return r;
}

}  // namespace tw
