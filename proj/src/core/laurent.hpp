#pragma once

#include <cmath>
#include <map>
#include <string>

#include "core/bigint.hpp"
#include "core/error.hpp"

namespace tw {

// Sparse Laurent polynomial in one variable u with BigInt coefficients.
// Used for exact tilted-coefficient comparisons: Z(lambda;n) as a polynomial
// in u = W^lambda, where exponents are endpoint heights in tau units.
class Laurent {
 public:
  Laurent() = default;
  explicit Laurent(long c) {
    if (c != 0) c_[0] = BigInt(c);
  }

  static Laurent monomial(const BigInt& coeff, int exp) {
    Laurent p;
    if (coeff != 0) p.c_[exp] = coeff;
    return p;
  }

  const std::map<int, BigInt>& terms() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  BigInt coeff(int exp) const {
    auto it = c_.find(exp);
    return it == c_.end() ? BigInt(0) : it->second;
  }

  void add_term(int exp, const BigInt& v) {
    if (v == 0) return;
    auto it = c_.find(exp);
    if (it == c_.end()) {
      c_[exp] = v;
    } else {
      it->second += v;
      if (it->second == 0) c_.erase(it);
    }
  }

  Laurent& operator+=(const Laurent& o) {
    for (const auto& [e, v] : o.c_) add_term(e, v);
    return *this;
  }
  Laurent& operator-=(const Laurent& o) {
    for (const auto& [e, v] : o.c_) add_term(e, -v);
    return *this;
  }
  friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
  friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    Laurent r;
    for (const auto& [ea, va] : a.c_)
      for (const auto& [eb, vb] : b.c_) r.add_term(ea + eb, va * vb);
    return r;
  }
  Laurent operator*(const BigInt& s) const {
    Laurent r;
    for (const auto& [e, v] : c_) r.add_term(e, v * s);
    return r;
  }
  friend bool operator==(const Laurent& a, const Laurent& b) { return a.c_ == b.c_; }

  // value at u = W^lambda
  double eval(double u) const {
    double s = 0;
    for (const auto& [e, v] : c_) s += v.get_d() * std::pow(u, e);
    return s;
  }

  // exact value at u = sqrt(w); exponents may be negative, so the caller
  // supplies a shift: returns (a + b*sqrt(w)) * w^(-shift) scaled by w^shift.
  RootInt eval_sqrt_scaled(std::uint64_t w, int shift) const {
    RootInt r(w);
    for (const auto& [e, v] : c_) {
      int es = e + 2 * shift;
      if (es < 0) fail(ErrorCode::Internal, "laurent: shift too small");
      RootInt t = half_power(w, (std::uint64_t)es);
      t.a *= v;
      t.b *= v;
      r += t;
    }
    return r;
  }

  std::string str() const {
    if (c_.empty()) return "0";
    std::string s;
    for (const auto& [e, v] : c_) {
      if (!s.empty()) s += " + ";
      s += v.get_str() + "*u^" + std::to_string(e);
    }
    return s;
  }

  int min_exp() const { return c_.empty() ? 0 : c_.begin()->first; }

 private:
  std::map<int, BigInt> c_;
};

}  // namespace tw
