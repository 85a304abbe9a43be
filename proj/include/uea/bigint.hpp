#pragma once

#include <concepts>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uea {

/// Arbitrary-precision signed integer, sign-magnitude with base-2^32 limbs.
/// Magnitudes never carry leading zero limbs; sign() is 0 exactly for zero.
class BigInt {
public:
  BigInt() = default;

  BigInt(long long v) {
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    // Avoid overflow on LLONG_MIN by working in unsigned space.
    unsigned long long m = v < 0 ? ~static_cast<unsigned long long>(v) + 1ULL
                                 : static_cast<unsigned long long>(v);
    while (m != 0) {
      mag_.push_back(static_cast<std::uint32_t>(m & 0xffffffffULL));
      m >>= 32;
    }
  }

  template <std::integral T>
  BigInt(T v) : BigInt(static_cast<long long>(v)) {}

  static BigInt from_string(std::string_view s) {
    BigInt r;
    bool neg = false;
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      neg = s[i] == '-';
      ++i;
    }
    if (i == s.size()) throw std::invalid_argument("empty integer literal");
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9')
        throw std::invalid_argument("bad digit in integer literal");
      r.mul_small(10);
      r.add_small(static_cast<std::uint32_t>(s[i] - '0'));
    }
    if (!r.mag_.empty()) r.sign_ = neg ? -1 : 1;
    return r;
  }

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  bool is_one() const { return sign_ == 1 && mag_.size() == 1 && mag_[0] == 1; }

  bool fits_int64() const {
    if (mag_.size() > 2) return false;
    unsigned long long m = mag_value();
    if (sign_ >= 0) return m <= 0x7fffffffffffffffULL;
    return m <= 0x8000000000000000ULL;
  }

  long long to_int64() const {
    unsigned long long m = mag_value();
    if (sign_ < 0) return static_cast<long long>(~m + 1ULL);
    return static_cast<long long>(m);
  }

  friend BigInt operator-(const BigInt& a) {
    BigInt r = a;
    r.sign_ = -r.sign_;
    return r;
  }

  friend BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    BigInt r;
    if (a.sign_ == b.sign_) {
      r.mag_ = add_mag(a.mag_, b.mag_);
      r.sign_ = a.sign_;
    } else {
      int c = cmp_mag(a.mag_, b.mag_);
      if (c == 0) return r;
      if (c > 0) {
        r.mag_ = sub_mag(a.mag_, b.mag_);
        r.sign_ = a.sign_;
      } else {
        r.mag_ = sub_mag(b.mag_, a.mag_);
        r.sign_ = b.sign_;
      }
    }
    return r;
  }

  friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

  friend BigInt operator*(const BigInt& a, const BigInt& b) {
    BigInt r;
    if (a.sign_ == 0 || b.sign_ == 0) return r;
    r.mag_.assign(a.mag_.size() + b.mag_.size(), 0);
    for (std::size_t i = 0; i < a.mag_.size(); ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < b.mag_.size(); ++j) {
        std::uint64_t cur = static_cast<std::uint64_t>(a.mag_[i]) * b.mag_[j] +
                            r.mag_[i + j] + carry;
        r.mag_[i + j] = static_cast<std::uint32_t>(cur);
        carry = cur >> 32;
      }
      r.mag_[i + b.mag_.size()] += static_cast<std::uint32_t>(carry);
    }
    r.trim();
    r.sign_ = a.sign_ * b.sign_;
    return r;
  }

  /// Truncating division (C semantics: quotient rounds toward zero,
  /// remainder has the dividend's sign).
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.sign_ == 0) throw std::domain_error("division by zero");
    q = BigInt();
    r = BigInt();
    if (a.sign_ == 0) return;
    int c = cmp_mag(a.mag_, b.mag_);
    if (c < 0) {
      r = a;
      return;
    }
    divmod_mag(a.mag_, b.mag_, q.mag_, r.mag_);
    if (!q.mag_.empty()) q.sign_ = a.sign_ * b.sign_;
    if (!r.mag_.empty()) r.sign_ = a.sign_;
  }

  friend BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return q;
  }

  friend BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return r;
  }

  friend bool operator==(const BigInt& a, const BigInt& b) {
    return a.sign_ == b.sign_ && a.mag_ == b.mag_;
  }
  friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
  friend bool operator<(const BigInt& a, const BigInt& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    int c = cmp_mag(a.mag_, b.mag_);
    return a.sign_ >= 0 ? c < 0 : c > 0;
  }
  friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
  friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
  friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

  BigInt abs() const {
    BigInt r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
  }

  static BigInt gcd(BigInt a, BigInt b) {
    a.sign_ = a.mag_.empty() ? 0 : 1;
    b.sign_ = b.mag_.empty() ? 0 : 1;
    while (!b.is_zero()) {
      BigInt q, r;
      divmod(a, b, q, r);
      a = b;
      b = r;
    }
    return a;
  }

  std::string str() const {
    if (sign_ == 0) return "0";
    std::vector<std::uint32_t> m = mag_;
    std::string digits;
    while (!m.empty()) {
      std::uint64_t rem = 0;
      for (std::size_t i = m.size(); i-- > 0;) {
        std::uint64_t cur = (rem << 32) | m[i];
        m[i] = static_cast<std::uint32_t>(cur / 1000000000ULL);
        rem = cur % 1000000000ULL;
      }
      while (!m.empty() && m.back() == 0) m.pop_back();
      for (int k = 0; k < 9; ++k) {
        digits.push_back(static_cast<char>('0' + rem % 10));
        rem /= 10;
      }
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    std::string out;
    if (sign_ < 0) out.push_back('-');
    out.append(digits.rbegin(), digits.rend());
    return out;
  }

  friend std::ostream& operator<<(std::ostream& os, const BigInt& x) {
    return os << x.str();
  }

private:
  int sign_ = 0;
  std::vector<std::uint32_t> mag_;

  unsigned long long mag_value() const {
    unsigned long long m = 0;
    if (mag_.size() > 0) m = mag_[0];
    if (mag_.size() > 1) m |= static_cast<unsigned long long>(mag_[1]) << 32;
    return m;
  }

  void trim() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) sign_ = 0;
  }

  void mul_small(std::uint32_t f) {
    std::uint64_t carry = 0;
    for (auto& limb : mag_) {
      std::uint64_t cur = static_cast<std::uint64_t>(limb) * f + carry;
      limb = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    if (carry) mag_.push_back(static_cast<std::uint32_t>(carry));
  }

  void add_small(std::uint32_t v) {
    std::uint64_t carry = v;
    for (auto& limb : mag_) {
      if (!carry) break;
      std::uint64_t cur = limb + carry;
      limb = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    if (carry) mag_.push_back(static_cast<std::uint32_t>(carry));
  }

  static int cmp_mag(const std::vector<std::uint32_t>& a,
                     const std::vector<std::uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
  }

  static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b) {
    const auto& big = a.size() >= b.size() ? a : b;
    const auto& small = a.size() >= b.size() ? b : a;
    std::vector<std::uint32_t> r = big;
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      std::uint64_t cur = static_cast<std::uint64_t>(r[i]) + carry +
                          (i < small.size() ? small[i] : 0);
      r[i] = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
      if (!carry && i >= small.size()) break;
    }
    if (carry) r.push_back(static_cast<std::uint32_t>(carry));
    return r;
  }

  // requires |a| >= |b|
  static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> r = a;
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      std::int64_t cur = static_cast<std::int64_t>(r[i]) - borrow -
                         (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
      borrow = cur < 0;
      if (cur < 0) cur += 0x100000000LL;
      r[i] = static_cast<std::uint32_t>(cur);
      if (!borrow && i >= b.size()) break;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  // shift-subtract long division on magnitudes; |a| >= |b| > 0
  static void divmod_mag(const std::vector<std::uint32_t>& a,
                         const std::vector<std::uint32_t>& b,
                         std::vector<std::uint32_t>& q,
                         std::vector<std::uint32_t>& r) {
    if (b.size() == 1) {
      std::uint64_t d = b[0], rem = 0;
      q.assign(a.size(), 0);
      for (std::size_t i = a.size(); i-- > 0;) {
        std::uint64_t cur = (rem << 32) | a[i];
        q[i] = static_cast<std::uint32_t>(cur / d);
        rem = cur % d;
      }
      while (!q.empty() && q.back() == 0) q.pop_back();
      r.clear();
      if (rem) r.push_back(static_cast<std::uint32_t>(rem));
      return;
    }
    int bits = static_cast<int>(a.size()) * 32;
    q.assign(a.size(), 0);
    r.clear();
    for (int i = bits - 1; i >= 0; --i) {
      // r = r*2 + bit i of a
      std::uint32_t carry = (a[i / 32] >> (i % 32)) & 1u;
      for (auto& limb : r) {
        std::uint32_t next = limb >> 31;
        limb = (limb << 1) | carry;
        carry = next;
      }
      if (carry) r.push_back(carry);
      if (cmp_mag(r, b) >= 0) {
        r = sub_mag(r, b);
        q[i / 32] |= 1u << (i % 32);
      }
    }
    while (!q.empty() && q.back() == 0) q.pop_back();
  }
};

}  // namespace uea
