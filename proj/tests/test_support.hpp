#pragma once

#include <random>

#include "uea/field.hpp"
#include "uea/linalg.hpp"

namespace uea::testing {

inline std::mt19937& rng() {
  static std::mt19937 gen(20240517u);
  return gen;
}

inline Rat random_rat(int bound = 20) {
  std::uniform_int_distribution<int> num(-bound, bound);
  std::uniform_int_distribution<int> den(1, bound);
  return Rat(BigInt(num(rng())), BigInt(den(rng())));
}

inline Zp random_zp(std::int64_t p) {
  std::uniform_int_distribution<std::int64_t> d(0, p - 1);
  return Zp(d(rng()), p);
}

template <class S>
S random_scalar(const Field<S>& F);

template <>
inline Rat random_scalar<Rat>(const Field<Rat>&) {
  return random_rat();
}

template <>
inline Zp random_scalar<Zp>(const Field<Zp>& F) {
  return random_zp(F.spec.p);
}

template <class S>
Mat<S> random_matrix(Index r, Index c, const Field<S>& F) {
  Mat<S> m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = random_scalar<S>(F);
  return m;
}

template <class S>
Mat<S> random_invertible(Index n, const Field<S>& F) {
  for (;;) {
    Mat<S> m = random_matrix<S>(n, n, F);
    if (is_invertible(m)) return m;
  }
}

}  // namespace uea::testing
