#pragma once

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uea/field.hpp"
#include "uea/linalg.hpp"

namespace uea {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int ln, const std::string& msg)
      : std::runtime_error("line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

struct NotNilpotentError : std::runtime_error {
  NotNilpotentError() : std::runtime_error("Lie algebra is not nilpotent") {}
};

/// Finite-dimensional Lie algebra given by structure constants on a basis
/// e_1..e_d. Only brackets [e_i, e_j] with i < j are stored; antisymmetry is
/// synthesized by the accessors, so it cannot be violated by construction.
template <class S>
class LieAlgebra {
public:
  LieAlgebra() = default;

  LieAlgebra(Field<S> F, Index dim)
      : F_(std::move(F)), dim_(dim),
        table_(static_cast<std::size_t>(dim * (dim - 1) / 2)) {
    for (auto& v : table_) v = zero_vector(dim_, F_);
  }

  const Field<S>& field() const { return F_; }
  Index dim() const { return dim_; }

  bool has_weights() const { return !weights_.empty(); }
  const std::vector<int>& weights() const { return weights_; }
  void set_weights(std::vector<int> w) { weights_ = std::move(w); }

  /// i < j, 0-based.
  void set_bracket(Index i, Index j, Vec<S> v) {
    table_[pair_index(i, j)] = std::move(v);
  }

  /// Bracket of basis vectors, any order of indices.
  Vec<S> bracket_basis(Index i, Index j) const {
    if (i == j) return zero_vector(dim_, F_);
    if (i < j) return table_[pair_index(i, j)];
    Vec<S> v = table_[pair_index(j, i)];
    for (Index k = 0; k < dim_; ++k) v(k) = -v(k);
    return v;
  }

  S structure_constant(Index i, Index j, Index k) const {
    if (i == j) return F_.zero();
    if (i < j) return table_[pair_index(i, j)](k);
    return -table_[pair_index(j, i)](k);
  }

  Vec<S> bracket(const Vec<S>& x, const Vec<S>& y) const {
    Vec<S> out = zero_vector(dim_, F_);
    for (Index i = 0; i < dim_; ++i) {
      if (x(i).is_zero()) continue;
      for (Index j = 0; j < dim_; ++j) {
        if (y(j).is_zero() || i == j) continue;
        S c = x(i) * y(j);
        const Vec<S>& br = i < j ? table_[pair_index(i, j)] : table_[pair_index(j, i)];
        if (i < j)
          for (Index k = 0; k < dim_; ++k) out(k) = out(k) + c * br(k);
        else
          for (Index k = 0; k < dim_; ++k) out(k) = out(k) - c * br(k);
      }
    }
    return out;
  }

  /// Matrix of ad(e_j) acting on column vectors: column i holds [e_i, e_j].
  Mat<S> ad_basis(Index j) const {
    Mat<S> m = zero_matrix(dim_, dim_, F_);
    for (Index i = 0; i < dim_; ++i) m.col(i) = bracket_basis(i, j);
    return m;
  }

private:
  std::size_t pair_index(Index i, Index j) const {
    return static_cast<std::size_t>(i * dim_ - i * (i + 1) / 2 + (j - i - 1));
  }

  Field<S> F_;
  Index dim_ = 0;
  std::vector<Vec<S>> table_;
  std::vector<int> weights_;
};

struct LieViolation {
  std::string kind;  // "jacobi" | "weight-order" | "weight-compat"
  Index i = -1, j = -1, k = -1;
  std::string detail;
};

/// Structural validation: Jacobi on all triples, and when weights are present,
/// monotonicity plus weight compatibility of every structure constant.
template <class S>
std::vector<LieViolation> validate(const LieAlgebra<S>& L) {
  std::vector<LieViolation> out;
  Index d = L.dim();
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j)
      for (Index k = j + 1; k < d; ++k) {
        Vec<S> r = L.bracket(L.bracket_basis(i, j), unit_vector(d, k, L.field()));
        Vec<S> r2 = L.bracket(L.bracket_basis(j, k), unit_vector(d, i, L.field()));
        Vec<S> r3 = L.bracket(L.bracket_basis(k, i), unit_vector(d, j, L.field()));
        for (Index t = 0; t < d; ++t) r(t) = r(t) + r2(t) + r3(t);
        if (!is_zero_vec(r)) {
          std::ostringstream os;
          os << "residual";
          for (Index t = 0; t < d; ++t)
            if (!r(t).is_zero())
              os << " + " << L.field().str(r(t)) << "*e." << t + 1;
          out.push_back({"jacobi", i, j, k, os.str()});
          return out;  // report the first failing triple
        }
      }
  if (L.has_weights()) {
    const auto& w = L.weights();
    for (Index i = 0; i + 1 < d; ++i)
      if (w[i] > w[i + 1]) {
        out.push_back({"weight-order", i, i + 1, -1,
                       "weights must be non-decreasing in the basis index"});
        return out;
      }
    for (Index i = 0; i < d; ++i)
      for (Index j = i + 1; j < d; ++j)
        for (Index k = 0; k < d; ++k)
          if (!L.structure_constant(i, j, k).is_zero() && w[k] < w[i] + w[j]) {
            out.push_back({"weight-compat", i, j, k,
                           "bracket lands below the additive weight"});
            return out;
          }
  }
  return out;
}

template <class S>
struct LowerCentralSeries {
  std::vector<Subspace<S>> terms;  // terms[0] = L^1 = L, strictly decreasing
  int clazz = 0;                   // least c with L^{c+1} = 0

  std::vector<Index> dims() const {
    std::vector<Index> out;
    for (const auto& t : terms)
      if (t.dim() > 0) out.push_back(t.dim());
    return out;
  }
};

/// L^1 = L, L^{i+1} = [L^i, L]. Throws NotNilpotentError when the series
/// fails to reach zero within dim steps.
template <class S>
LowerCentralSeries<S> lower_central_series(const LieAlgebra<S>& L) {
  LowerCentralSeries<S> out;
  Index d = L.dim();
  out.terms.push_back(Subspace<S>::full(d, L.field()));
  for (;;) {
    const Subspace<S>& cur = out.terms.back();
    if (cur.dim() == 0) break;
    Mat<S> rows(cur.dim() * d, d);
    Index r = 0;
    for (Index b = 0; b < cur.dim(); ++b) {
      Vec<S> v = cur.basis().row(b).transpose();
      for (Index j = 0; j < d; ++j)
        rows.row(r++) = L.bracket(v, unit_vector(d, j, L.field())).transpose();
    }
    Subspace<S> next = Subspace<S>::from_rows(rows);
    if (next.dim() == cur.dim()) throw NotNilpotentError();
    out.terms.push_back(std::move(next));
    if (out.terms.back().dim() == 0) break;
  }
  out.clazz = static_cast<int>(out.terms.size()) - 1;
  return out;
}

/// Kernel of the stacked adjoint maps z -> [z, e_j].
template <class S>
Subspace<S> lie_center(const LieAlgebra<S>& L) {
  Index d = L.dim();
  Mat<S> M(d * d, d);
  for (Index j = 0; j < d; ++j)
    for (Index r = 0; r < d; ++r)
      for (Index i = 0; i < d; ++i)
        M(j * d + r, i) = L.structure_constant(i, j, r);
  return kernel(M, L.field());
}

/// New algebra on basis rows P (new basis expressed in old coordinates).
template <class S>
LieAlgebra<S> change_basis(const LieAlgebra<S>& L, const Mat<S>& P) {
  Index d = L.dim();
  LieAlgebra<S> out(L.field(), d);
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      Vec<S> br = L.bracket(P.row(i).transpose(), P.row(j).transpose());
      auto coords = coordinates_in(P, br, L.field());
      if (!coords) throw std::runtime_error("basis change is not invertible");
      out.set_bracket(i, j, *coords);
    }
  return out;
}

template <class S>
struct HomogeneousBasis {
  LieAlgebra<S> algebra;   // re-based, weights filled in
  Mat<S> new_from_old;     // rows = new basis in old coordinates
  bool identity = false;
};

/// Weight of each basis vector: the largest i with e_k in L^i; -1 when the
/// basis is not adapted to the series (some vector escapes its layer count).
template <class S>
std::optional<std::vector<int>> basis_weights(const LieAlgebra<S>& L,
                                              const LowerCentralSeries<S>& lcs) {
  Index d = L.dim();
  std::vector<int> w(static_cast<std::size_t>(d), 1);
  for (Index k = 0; k < d; ++k) {
    Vec<S> e = unit_vector(d, k, L.field());
    int depth = 0;
    for (std::size_t t = 0; t < lcs.terms.size(); ++t)
      if (lcs.terms[t].contains(e)) depth = static_cast<int>(t) + 1;
    w[static_cast<std::size_t>(k)] = depth;
  }
  // homogeneous iff counts by weight match the series layer dims and weights
  // are non-decreasing
  for (Index k = 0; k + 1 < d; ++k)
    if (w[k] > w[k + 1]) return std::nullopt;
  for (std::size_t t = 0; t < lcs.terms.size(); ++t) {
    Index count = 0;
    for (int wk : w)
      if (wk >= static_cast<int>(t) + 1) ++count;
    if (count != lcs.terms[t].dim()) return std::nullopt;
  }
  return w;
}

/// Re-base to a homogeneous basis with non-decreasing weights. Keeps the
/// original basis (identity change) when it is already homogeneous.
template <class S>
HomogeneousBasis<S> homogeneous_basis(const LieAlgebra<S>& L) {
  auto lcs = lower_central_series(L);
  Index d = L.dim();
  if (auto w = basis_weights(L, lcs)) {
    HomogeneousBasis<S> out{L, identity_matrix(d, L.field()), true};
    out.algebra.set_weights(*w);
    return out;
  }
  Mat<S> P(d, d);
  std::vector<int> weights;
  Index row = 0;
  for (int w = 1; w <= lcs.clazz; ++w) {
    const Subspace<S>& outer = lcs.terms[static_cast<std::size_t>(w - 1)];
    Subspace<S> inner = w < static_cast<int>(lcs.terms.size())
                            ? lcs.terms[static_cast<std::size_t>(w)]
                            : Subspace<S>::zero(d);
    Mat<S> comp = echelon_complement(inner, outer);
    for (Index i = 0; i < comp.rows(); ++i) {
      P.row(row++) = comp.row(i);
      weights.push_back(w);
    }
  }
  HomogeneousBasis<S> out{change_basis(L, P), P, false};
  out.algebra.set_weights(weights);
  return out;
}

template <class S>
struct GradedLieAlgebra {
  LieAlgebra<S> algebra;            // weight-homogeneous structure constants
  std::vector<Index> component_dims;  // dim L^i / L^{i+1}
};

/// Associated graded algebra of the lower central series, computed in a
/// homogeneous basis: the bracket keeps only its additive-weight component.
template <class S>
GradedLieAlgebra<S> graded_algebra(const LieAlgebra<S>& L0) {
  auto hb = homogeneous_basis(L0);
  const LieAlgebra<S>& L = hb.algebra;
  Index d = L.dim();
  const auto& w = L.weights();
  GradedLieAlgebra<S> out;
  out.algebra = LieAlgebra<S>(L.field(), d);
  out.algebra.set_weights(w);
  int clazz = w.empty() ? 0 : w.back();
  out.component_dims.assign(static_cast<std::size_t>(clazz), 0);
  for (int wk : w) out.component_dims[static_cast<std::size_t>(wk - 1)]++;
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      Vec<S> br = L.bracket_basis(i, j);
      for (Index k = 0; k < d; ++k)
        if (w[k] != w[i] + w[j]) br(k) = L.field().zero();
      out.algebra.set_bracket(i, j, std::move(br));
    }
  return out;
}

template <class S>
bool same_structure_constants(const LieAlgebra<S>& a, const LieAlgebra<S>& b) {
  if (a.dim() != b.dim()) return false;
  for (Index i = 0; i < a.dim(); ++i)
    for (Index j = i + 1; j < a.dim(); ++j)
      if (a.bracket_basis(i, j) != b.bracket_basis(i, j)) return false;
  return true;
}

}  // namespace uea
