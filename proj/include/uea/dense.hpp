#pragma once

#include <Eigen/Core>

#include "uea/rational.hpp"
#include "uea/zp.hpp"

namespace uea {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <class S>
using RowVec = Eigen::Matrix<S, 1, Eigen::Dynamic>;

}  // namespace uea

namespace Eigen {

template <>
struct NumTraits<uea::Rat> : GenericNumTraits<uea::Rat> {
  typedef uea::Rat Real;
  typedef uea::Rat NonInteger;
  typedef uea::Rat Nested;
  typedef uea::Rat Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 60,
    MulCost = 60,
  };
  static inline Real epsilon() { return uea::Rat(); }
  static inline Real dummy_precision() { return uea::Rat(); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<uea::Zp> : GenericNumTraits<uea::Zp> {
  typedef uea::Zp Real;
  typedef uea::Zp NonInteger;
  typedef uea::Zp Nested;
  typedef uea::Zp Literal;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 4,
  };
  static inline Real epsilon() { return uea::Zp(); }
  static inline Real dummy_precision() { return uea::Zp(); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
