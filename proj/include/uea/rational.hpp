#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "uea/bigint.hpp"

namespace uea {

/// Exact rational number: reduced fraction with positive denominator.
class Rat {
public:
  Rat() : num_(0), den_(1) {}
  Rat(long long v) : num_(v), den_(1) {}
  Rat(int v) : num_(v), den_(1) {}
  Rat(BigInt n) : num_(std::move(n)), den_(1) {}

  Rat(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw std::domain_error("rational with zero denominator");
    normalize();
  }

  static Rat from_string(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rat(BigInt::from_string(s));
    return Rat(BigInt::from_string(s.substr(0, slash)),
               BigInt::from_string(s.substr(slash + 1)));
  }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  int sign() const { return num_.sign(); }

  friend Rat operator-(const Rat& a) { return Rat(-a.num_, a.den_, raw{}); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return Rat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return Rat(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_zero()) throw std::domain_error("rational division by zero");
    return Rat(a.num_ * b.den_, a.den_ * b.num_);
  }

  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  Rat inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    return Rat(den_, num_);
  }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }

  std::string str() const {
    if (den_.is_one()) return num_.str();
    return num_.str() + "/" + den_.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& x) {
    return os << x.str();
  }

private:
  struct raw {};
  Rat(BigInt n, BigInt d, raw) : num_(std::move(n)), den_(std::move(d)) {}

  void normalize() {
    if (den_.sign() < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_.is_zero()) {
      den_ = BigInt(1);
      return;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (!g.is_one()) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
  }

  BigInt num_, den_;
};

}  // namespace uea
