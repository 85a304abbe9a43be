#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "uea/bigint.hpp"
#include "uea/rational.hpp"
#include "uea/zp.hpp"

namespace uea {

/// Description of the coefficient field: the rationals or a prime field GF(p).
/// Literal syntax used in files and on the command line: `Q` or `GF(p)`.
struct FieldSpec {
  enum class Kind { Rationals, PrimeField };
  Kind kind = Kind::Rationals;
  std::int64_t p = 0;

  bool finite() const { return kind == Kind::PrimeField; }

  std::string str() const {
    if (kind == Kind::Rationals) return "Q";
    return "GF(" + std::to_string(p) + ")";
  }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.kind == b.kind && (a.kind == Kind::Rationals || a.p == b.p);
  }
  friend bool operator!=(const FieldSpec& a, const FieldSpec& b) { return !(a == b); }

  static bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

  static FieldSpec rationals() { return FieldSpec{Kind::Rationals, 0}; }

  static FieldSpec prime_field(std::int64_t p) {
    if (p >= (std::int64_t(1) << 31))
      throw std::domain_error("modulus exceeds 2^31");
    if (!is_prime(p)) throw std::domain_error("modulus is not prime");
    return FieldSpec{Kind::PrimeField, p};
  }

  static std::optional<FieldSpec> parse(std::string_view s) {
    if (s == "Q" || s == "q") return rationals();
    if (s.size() >= 5 && (s.substr(0, 3) == "GF(" || s.substr(0, 3) == "gf(") &&
        s.back() == ')') {
      std::string digits(s.substr(3, s.size() - 4));
      if (digits.empty()) return std::nullopt;
      for (char c : digits)
        if (c < '0' || c > '9') return std::nullopt;
      return prime_field(std::stoll(digits));
    }
    return std::nullopt;
  }
};

/// Scalar factory bound to a FieldSpec. All templated code mints elements
/// through one of these instead of invoking scalar constructors directly.
template <class S>
struct Field;

template <>
struct Field<Rat> {
  using Scalar = Rat;
  FieldSpec spec = FieldSpec::rationals();

  Field() = default;
  explicit Field(const FieldSpec& fs) : spec(fs) {
    if (fs.kind != FieldSpec::Kind::Rationals)
      throw std::domain_error("Field<Rat> needs the rational field spec");
  }

  Rat zero() const { return Rat(); }
  Rat one() const { return Rat(1); }
  Rat from_long(long long v) const { return Rat(v); }
  Rat from_fraction(const BigInt& n, const BigInt& d) const { return Rat(n, d); }
  Rat parse(std::string_view s) const { return Rat::from_string(s); }
  std::string str(const Rat& x) const { return x.str(); }

  bool finite() const { return false; }
  std::int64_t order() const {
    throw std::domain_error("rational field is infinite");
  }
  Rat element(std::int64_t) const {
    throw std::domain_error("rational field is not enumerable");
  }
};

template <>
struct Field<Zp> {
  using Scalar = Zp;
  FieldSpec spec;

  Field() : spec(FieldSpec::prime_field(2)) {}
  explicit Field(const FieldSpec& fs) : spec(fs) {
    if (fs.kind != FieldSpec::Kind::PrimeField)
      throw std::domain_error("Field<Zp> needs a prime field spec");
  }

  Zp zero() const { return Zp(0, spec.p); }
  Zp one() const { return Zp(1, spec.p); }
  Zp from_long(long long v) const { return Zp(v, spec.p); }
  Zp from_fraction(const BigInt& n, const BigInt& d) const {
    BigInt p(spec.p);
    long long nv = (n % p).to_int64();
    long long dv = (d % p).to_int64();
    Zp den(dv, spec.p);
    if (den.is_zero()) throw std::domain_error("denominator vanishes mod p");
    return Zp(nv, spec.p) / den;
  }
  Zp parse(std::string_view s) const {
    auto slash = s.find('/');
    if (slash == std::string_view::npos)
      return from_fraction(BigInt::from_string(s), BigInt(1));
    return from_fraction(BigInt::from_string(s.substr(0, slash)),
                         BigInt::from_string(s.substr(slash + 1)));
  }
  std::string str(const Zp& x) const { return x.str(); }

  bool finite() const { return true; }
  std::int64_t order() const { return spec.p; }
  /// Canonical enumeration 0, 1, ..., p-1.
  Zp element(std::int64_t i) const { return Zp(i, spec.p); }
};

}  // namespace uea
