#pragma once

#include <algorithm>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "uea/lie_algebra.hpp"

namespace uea {

/// A monomial x_{i1} x_{i2} ... x_{ik} in normal form: indices non-decreasing,
/// 0-based, k >= 1.
using Mono = std::vector<Index>;

inline std::string pack_mono(const Mono& m) {
  std::string s;
  s.reserve(m.size());
  for (Index i : m) s.push_back(static_cast<char>(i));
  return s;
}

/// Number of normal monomials of each total weight in 1..max_weight, counted
/// by a subset-sum recurrence over the generators. Used as an independent
/// oracle for the basis enumeration.
inline std::vector<long long> weighted_monomial_counts(const std::vector<int>& weights,
                                                       int max_weight) {
  std::vector<long long> count(static_cast<std::size_t>(max_weight) + 1, 0);
  count[0] = 1;
  // process generators one at a time; each may repeat (multisets)
  for (int w : weights) {
    for (int total = w; total <= max_weight; ++total)
      count[static_cast<std::size_t>(total)] +=
          count[static_cast<std::size_t>(total - w)];
  }
  count[0] = 0;  // the empty monomial is not part of the quotient
  return count;
}

/// The finite-dimensional algebra spanned by PBW monomials of weight < t in
/// the generators of a nilpotent Lie algebra with homogeneous basis: the
/// quotient of its augmentation ideal by the ideal of weight >= t. Non-unital
/// and nilpotent: any product of t generators vanishes.
///
/// Basis order is fixed as (weight, degree, lexicographic on indices); every
/// report and certificate uses it.
template <class S>
class Envelope {
public:
  Envelope(LieAlgebra<S> L, int t) : L_(std::move(L)), t_(t) {
    if (t_ < 2) throw std::invalid_argument("truncation level must be >= 2");
    if (!L_.has_weights())
      throw std::invalid_argument("envelope construction needs a homogeneous basis with weights");
    {
      auto bad = validate(L_);
      if (!bad.empty())
        throw std::invalid_argument("source algebra fails validation: " + bad[0].kind);
    }
    Mono cur;
    enumerate(cur, 0, 0);
    std::sort(basis_.begin(), basis_.end(), [&](const Mono& a, const Mono& b) {
      int wa = mono_weight(a), wb = mono_weight(b);
      if (wa != wb) return wa < wb;
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });
    index_.reserve(basis_.size() * 2);
    for (std::size_t i = 0; i < basis_.size(); ++i)
      index_.emplace(pack_mono(basis_[i]), static_cast<Index>(i));
    weight_.resize(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i)
      weight_[i] = mono_weight(basis_[i]);
    layer_begin_.assign(static_cast<std::size_t>(t_) + 1, dim());
    for (Index i = dim(); i-- > 0;)
      layer_begin_[static_cast<std::size_t>(weight_[static_cast<std::size_t>(i)])] = i;
    for (int w = t_ - 1; w >= 1; --w)
      if (layer_begin_[static_cast<std::size_t>(w)] >
          layer_begin_[static_cast<std::size_t>(w) + 1])
        layer_begin_[static_cast<std::size_t>(w)] =
            layer_begin_[static_cast<std::size_t>(w) + 1];
    letter_memo_.resize(static_cast<std::size_t>(L_.dim()) * basis_.size());
    table_.resize(basis_.size() * basis_.size());
  }

  const LieAlgebra<S>& source() const { return L_; }
  const Field<S>& field() const { return L_.field(); }
  int truncation() const { return t_; }
  Index dim() const { return static_cast<Index>(basis_.size()); }
  const std::vector<Mono>& basis() const { return basis_; }
  const Mono& mono(Index b) const { return basis_[static_cast<std::size_t>(b)]; }
  int weight_of(Index b) const { return weight_[static_cast<std::size_t>(b)]; }
  int degree_of(Index b) const {
    return static_cast<int>(basis_[static_cast<std::size_t>(b)].size());
  }
  int max_weight() const { return t_ - 1; }

  /// Basis indices of weight w occupy [layer_begin(w), layer_begin(w+1)).
  Index layer_begin(int w) const {
    if (w > t_) return dim();
    if (w < 1) return 0;
    return layer_begin_[static_cast<std::size_t>(w)];
  }
  Index layer_dim(int w) const {
    if (w < 1 || w >= t_) return 0;
    return layer_begin(w + 1) - layer_begin(w);
  }
  /// Number of weight-1 generators (they generate the whole algebra).
  Index generator_count() const { return layer_dim(1); }

  Index index_of(const Mono& m) const {
    auto it = index_.find(pack_mono(m));
    return it == index_.end() ? -1 : it->second;
  }

  /// Memoized product of two basis monomials.
  const Vec<S>& product(Index a, Index b) const {
    auto& slot = table_[static_cast<std::size_t>(a) * basis_.size() +
                        static_cast<std::size_t>(b)];
    if (!slot) {
      Vec<S> r = unit_or_zero(b);
      const Mono& m = basis_[static_cast<std::size_t>(a)];
      for (std::size_t k = m.size(); k-- > 0;) r = mult_letter_elem(m[k], r);
      slot = std::make_unique<Vec<S>>(std::move(r));
    }
    return *slot;
  }

  void force_table() const {
    for (Index a = 0; a < dim(); ++a)
      for (Index b = 0; b < dim(); ++b) product(a, b);
  }

  Vec<S> mult(const Vec<S>& x, const Vec<S>& y) const {
    if (x.size() != dim() || y.size() != dim())
      throw std::invalid_argument("elements belong to a different envelope");
    Vec<S> out = zero_vector(dim(), field());
    for (Index a = 0; a < dim(); ++a) {
      if (x(a).is_zero()) continue;
      for (Index b = 0; b < dim(); ++b) {
        if (y(b).is_zero()) continue;
        if (weight_of(a) + weight_of(b) >= t_) continue;
        const Vec<S>& p = product(a, b);
        S c = x(a) * y(b);
        for (Index k = 0; k < dim(); ++k) out(k) = out(k) + c * p(k);
      }
    }
    return out;
  }

  Vec<S> commutator(const Vec<S>& x, const Vec<S>& y) const {
    Vec<S> ab = mult(x, y), ba = mult(y, x);
    for (Index k = 0; k < dim(); ++k) ab(k) = ab(k) - ba(k);
    return ab;
  }

  /// Normal form of an arbitrary word of generator indices (0-based).
  Vec<S> straighten(const std::vector<Index>& word) const {
    if (word.empty()) throw std::invalid_argument("empty word");
    Vec<S> r = unit_or_zero_letter(word.back());
    for (std::size_t k = word.size() - 1; k-- > 0;)
      r = mult_letter_elem(word[k], r);
    return r;
  }

  /// Degree-1 embedding of a Lie algebra element (coordinates in the source
  /// basis); components of weight >= t vanish.
  Vec<S> lie_element(const Vec<S>& x) const {
    Vec<S> out = zero_vector(dim(), field());
    for (Index i = 0; i < L_.dim(); ++i) {
      if (x(i).is_zero()) continue;
      Index b = index_of(Mono{i});
      if (b >= 0) out(b) = out(b) + x(i);
    }
    return out;
  }

  /// Weight-w component of an element.
  Vec<S> component(const Vec<S>& x, int w) const {
    Vec<S> out = zero_vector(dim(), field());
    for (Index b = layer_begin(w); b < layer_begin(w + 1); ++b) out(b) = x(b);
    return out;
  }

  /// Least weight with a nonzero component, or t for zero.
  int valuation(const Vec<S>& x) const {
    for (Index b = 0; b < dim(); ++b)
      if (!x(b).is_zero()) return weight_of(b);
    return t_;
  }

  std::string format_mono(Index b, bool file_style = false) const {
    const Mono& m = basis_[static_cast<std::size_t>(b)];
    std::ostringstream os;
    std::size_t i = 0;
    bool first = true;
    while (i < m.size()) {
      std::size_t j = i;
      while (j < m.size() && m[j] == m[i]) ++j;
      if (!first) os << "*";
      os << (file_style ? "e." : "x") << m[i] + 1;
      if (j - i > 1) os << "^" << j - i;
      first = false;
      i = j;
    }
    return os.str();
  }

  std::string format_element(const Vec<S>& v, bool file_style = false) const {
    std::string out;
    for (Index b = 0; b < dim(); ++b) {
      if (v(b).is_zero()) continue;
      if (!out.empty()) out += " + ";
      out += field().str(v(b)) + "*" + format_mono(b, file_style);
    }
    return out.empty() ? "0" : out;
  }

private:
  void enumerate(Mono& cur, Index min_gen, int weight_so_far) {
    if (!cur.empty()) basis_.push_back(cur);
    for (Index g = min_gen; g < L_.dim(); ++g) {
      int w = weight_so_far + L_.weights()[static_cast<std::size_t>(g)];
      if (w >= t_) continue;
      cur.push_back(g);
      enumerate(cur, g, w);
      cur.pop_back();
    }
  }

  int mono_weight(const Mono& m) const {
    int w = 0;
    for (Index i : m) w += L_.weights()[static_cast<std::size_t>(i)];
    return w;
  }

  Vec<S> unit_or_zero(Index b) const {
    Vec<S> v = zero_vector(dim(), field());
    v(b) = field().one();
    return v;
  }

  Vec<S> unit_or_zero_letter(Index g) const {
    Vec<S> v = zero_vector(dim(), field());
    Index b = index_of(Mono{g});
    if (b >= 0) v(b) = field().one();
    return v;
  }

  /// x_g * basis monomial b, straightened. The out-of-order case rewrites
  /// x_g x_h = x_h x_g + [x_g, x_h]; the swap lowers the inversion count and
  /// the bracket lowers the degree, which grounds the recursion.
  const Vec<S>& mult_letter(Index g, Index b) const {
    auto& slot = letter_memo_[static_cast<std::size_t>(g) * basis_.size() +
                              static_cast<std::size_t>(b)];
    if (slot) return *slot;
    Vec<S> out;
    int gw = L_.weights()[static_cast<std::size_t>(g)];
    if (gw + weight_of(b) >= t_) {
      out = zero_vector(dim(), field());
    } else {
      const Mono& m = basis_[static_cast<std::size_t>(b)];
      if (g <= m[0]) {
        Mono joined;
        joined.reserve(m.size() + 1);
        joined.push_back(g);
        joined.insert(joined.end(), m.begin(), m.end());
        out = unit_or_zero(index_of(joined));
      } else {
        Index h = m[0];
        Mono rest(m.begin() + 1, m.end());
        Vec<S> a = rest.empty() ? unit_or_zero_letter(g)
                                : Vec<S>(mult_letter(g, index_of(rest)));
        out = mult_letter_elem(h, a);
        Vec<S> br = L_.bracket_basis(g, h);
        for (Index k = 0; k < L_.dim(); ++k) {
          if (br(k).is_zero()) continue;
          Vec<S> tail = rest.empty() ? unit_or_zero_letter(k)
                                     : Vec<S>(mult_letter(k, index_of(rest)));
          for (Index b2 = 0; b2 < dim(); ++b2)
            out(b2) = out(b2) + br(k) * tail(b2);
        }
      }
    }
    slot = std::make_unique<Vec<S>>(std::move(out));
    return *slot;
  }

  Vec<S> mult_letter_elem(Index g, const Vec<S>& x) const {
    Vec<S> out = zero_vector(dim(), field());
    for (Index b = 0; b < dim(); ++b) {
      if (x(b).is_zero()) continue;
      const Vec<S>& p = mult_letter(g, b);
      for (Index k = 0; k < dim(); ++k) out(k) = out(k) + x(b) * p(k);
    }
    return out;
  }

  LieAlgebra<S> L_;
  int t_;
  std::vector<Mono> basis_;
  std::vector<int> weight_;
  std::vector<Index> layer_begin_;
  std::unordered_map<std::string, Index> index_;
  mutable std::vector<std::unique_ptr<Vec<S>>> letter_memo_;
  mutable std::vector<std::unique_ptr<Vec<S>>> table_;
};

/// Envelope of L at truncation t with the multiplication table filled in,
/// after moving to a homogeneous basis when the input is not already one.
template <class S>
Envelope<S> truncated_envelope(const LieAlgebra<S>& L, int t) {
  if (L.has_weights()) {
    Envelope<S> E(L, t);
    E.force_table();
    return E;
  }
  auto hb = homogeneous_basis(L);
  Envelope<S> E(hb.algebra, t);
  E.force_table();
  return E;
}

}  // namespace uea
