#pragma once

#include <concepts>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace uea {

/// Element of a prime field GF(p), stored as the canonical residue in [0, p).
///
/// The modulus travels with the element. Values built from a bare integer
/// (what generic code, Eigen included, produces via Scalar(0) or Scalar(1))
/// carry modulus 0 and behave as integer literals: they reduce into GF(p) on
/// first contact with a typed element.
class Zp {
public:
  Zp() = default;

  template <std::integral T>
  Zp(T v) : v_(static_cast<std::int64_t>(v)), p_(0) {}

  Zp(long long v, std::int64_t p) : p_(p) {
    if (p <= 1) throw std::domain_error("bad modulus");
    v_ = v % p;
    if (v_ < 0) v_ += p;
  }

  std::int64_t value() const { return v_; }
  std::int64_t modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  friend Zp operator-(const Zp& a) {
    if (a.p_ == 0) return Zp(-a.v_);
    return Zp(-a.v_, a.p_);
  }

  friend Zp operator+(const Zp& a, const Zp& b) {
    std::int64_t p = joint_modulus(a, b);
    if (p == 0) return Zp(a.v_ + b.v_);
    return Zp(a.lift(p) + b.lift(p), p);
  }
  friend Zp operator-(const Zp& a, const Zp& b) {
    std::int64_t p = joint_modulus(a, b);
    if (p == 0) return Zp(a.v_ - b.v_);
    return Zp(a.lift(p) - b.lift(p), p);
  }
  friend Zp operator*(const Zp& a, const Zp& b) {
    std::int64_t p = joint_modulus(a, b);
    if (p == 0) return Zp(a.v_ * b.v_);
    return Zp(a.lift(p) * b.lift(p), p);
  }
  friend Zp operator/(const Zp& a, const Zp& b) { return a * b.inverse(); }

  Zp& operator+=(const Zp& o) { return *this = *this + o; }
  Zp& operator-=(const Zp& o) { return *this = *this - o; }
  Zp& operator*=(const Zp& o) { return *this = *this * o; }
  Zp& operator/=(const Zp& o) { return *this = *this / o; }

  Zp inverse() const {
    if (p_ == 0) throw std::domain_error("inverse of untyped GF(p) literal");
    if (v_ == 0) throw std::domain_error("inverse of zero in GF(p)");
    // extended Euclid on (v, p)
    std::int64_t r0 = v_, r1 = p_, s0 = 1, s1 = 0;
    while (r1 != 0) {
      std::int64_t q = r0 / r1;
      std::int64_t r2 = r0 - q * r1;
      std::int64_t s2 = s0 - q * s1;
      r0 = r1; r1 = r2;
      s0 = s1; s1 = s2;
    }
    return Zp(s0, p_);
  }

  friend bool operator==(const Zp& a, const Zp& b) {
    std::int64_t p = joint_modulus(a, b);
    if (p == 0) return a.v_ == b.v_;
    return a.lift(p) == b.lift(p);
  }
  friend bool operator!=(const Zp& a, const Zp& b) { return !(a == b); }

  std::string str() const { return std::to_string(v_); }

  friend std::ostream& operator<<(std::ostream& os, const Zp& x) {
    return os << x.str();
  }

private:
  std::int64_t v_ = 0;
  std::int64_t p_ = 0;

  std::int64_t lift(std::int64_t p) const {
    std::int64_t r = v_ % p;
    return r < 0 ? r + p : r;
  }

  static std::int64_t joint_modulus(const Zp& a, const Zp& b) {
    if (a.p_ == 0) return b.p_;
    if (b.p_ == 0) return a.p_;
    if (a.p_ != b.p_) throw std::domain_error("mixed GF(p) moduli");
    return a.p_;
  }
};

}  // namespace uea
