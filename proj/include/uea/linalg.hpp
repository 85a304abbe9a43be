#pragma once

#include <optional>
#include <vector>

#include "uea/dense.hpp"
#include "uea/field.hpp"

namespace uea {

using Index = Eigen::Index;

template <class S>
struct RrefResult {
  Mat<S> reduced;
  std::vector<Index> pivots;  // pivot column of each nonzero row, in row order
  Index rank = 0;
};

/// Reduced row echelon form with positional pivoting: the pivot for the
/// leftmost unfinished column is the first row (top to bottom) with a nonzero
/// entry there. Exact arithmetic makes this deterministic across platforms.
template <class S>
RrefResult<S> rref(Mat<S> m) {
  RrefResult<S> out;
  Index rows = m.rows(), cols = m.cols();
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index piv = -1;
    for (Index i = r; i < rows; ++i) {
      if (!m(i, c).is_zero()) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != r) m.row(piv).swap(m.row(r));
    S inv_lead = m(r, c).inverse();
    for (Index j = c; j < cols; ++j) m(r, j) = m(r, j) * inv_lead;
    for (Index i = 0; i < rows; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      S f = m(i, c);
      for (Index j = c; j < cols; ++j) m(i, j) = m(i, j) - f * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.reduced = std::move(m);
  return out;
}

template <class S>
Index rank(const Mat<S>& m) {
  return rref(m).rank;
}

/// Row space of a matrix in reduced echelon form, with zero rows dropped.
/// Every span in the library lives in one of these.
template <class S>
class Subspace {
public:
  Subspace() = default;
  Subspace(Index ambient, Mat<S> rref_basis)
      : ambient_(ambient), basis_(std::move(rref_basis)) {}

  static Subspace zero(Index ambient) {
    return Subspace(ambient, Mat<S>(0, ambient));
  }

  static Subspace full(Index ambient, const Field<S>& F) {
    Mat<S> id(ambient, ambient);
    for (Index i = 0; i < ambient; ++i)
      for (Index j = 0; j < ambient; ++j)
        id(i, j) = i == j ? F.one() : F.zero();
    return Subspace(ambient, std::move(id));
  }

  static Subspace from_rows(const Mat<S>& rows) {
    auto rr = rref(rows);
    return Subspace(rows.cols(), rr.reduced.topRows(rr.rank));
  }

  Index ambient() const { return ambient_; }
  Index dim() const { return basis_.rows(); }
  const Mat<S>& basis() const { return basis_; }

  /// Residual of v after elimination against the basis; zero iff v is in the span.
  Vec<S> reduce(Vec<S> v) const {
    for (Index i = 0; i < basis_.rows(); ++i) {
      Index lead = leading_col(i);
      if (!v(lead).is_zero()) {
        S f = v(lead);
        for (Index j = lead; j < ambient_; ++j)
          v(j) = v(j) - f * basis_(i, j);
      }
    }
    return v;
  }

  bool contains(const Vec<S>& v) const {
    Vec<S> r = reduce(v);
    for (Index j = 0; j < r.size(); ++j)
      if (!r(j).is_zero()) return false;
    return true;
  }

  bool contains(const Subspace& other) const {
    for (Index i = 0; i < other.dim(); ++i)
      if (!contains(Vec<S>(other.basis_.row(i).transpose()))) return false;
    return true;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_.rows() == b.basis_.rows() &&
           a.contains(b);
  }

private:
  Index leading_col(Index row) const {
    for (Index j = 0; j < ambient_; ++j)
      if (!basis_(row, j).is_zero()) return j;
    return ambient_;
  }

  Index ambient_ = 0;
  Mat<S> basis_{0, 0};
};

template <class S>
Subspace<S> span_sum(const Subspace<S>& a, const Subspace<S>& b) {
  Mat<S> stacked(a.dim() + b.dim(), a.ambient());
  stacked.topRows(a.dim()) = a.basis();
  stacked.bottomRows(b.dim()) = b.basis();
  return Subspace<S>::from_rows(stacked);
}

/// Kernel (null space) of A as a subspace of F^cols, from the RREF free columns.
template <class S>
Subspace<S> kernel(const Mat<S>& A, const Field<S>& F) {
  auto rr = rref(A);
  Index n = A.cols();
  std::vector<bool> is_pivot(n, false);
  for (Index c : rr.pivots) is_pivot[c] = true;
  Index k = n - rr.rank;
  Mat<S> basis(k, n);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < n; ++j) basis(i, j) = F.zero();
  Index row = 0;
  for (Index c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    basis(row, c) = F.one();
    for (Index pr = 0; pr < rr.rank; ++pr)
      basis(row, rr.pivots[pr]) = -rr.reduced(pr, c);
    ++row;
  }
  return Subspace<S>::from_rows(basis);
}

template <class S>
Subspace<S> span_intersect(const Subspace<S>& a, const Subspace<S>& b,
                           const Field<S>& F) {
  // x in both row spaces: x = u A = w B; solve [A^T | -B^T] (u; w) = 0.
  Index n = a.ambient();
  Mat<S> M(n, a.dim() + b.dim());
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < a.dim(); ++i) M(j, i) = a.basis()(i, j);
    for (Index i = 0; i < b.dim(); ++i) M(j, a.dim() + i) = -b.basis()(i, j);
  }
  Subspace<S> ker = kernel(M, F);
  Mat<S> rows(ker.dim(), n);
  for (Index r = 0; r < ker.dim(); ++r) {
    Vec<S> x(n);
    for (Index j = 0; j < n; ++j) x(j) = F.zero();
    for (Index i = 0; i < a.dim(); ++i) {
      S u = ker.basis()(r, i);
      if (u.is_zero()) continue;
      for (Index j = 0; j < n; ++j) x(j) = x(j) + u * a.basis()(i, j);
    }
    rows.row(r) = x.transpose();
  }
  return Subspace<S>::from_rows(rows);
}

/// Rows of `outer` extending a basis of `inner` to one of `outer`, chosen in
/// echelon order so the complement is deterministic.
template <class S>
Mat<S> echelon_complement(const Subspace<S>& inner, const Subspace<S>& outer) {
  std::vector<Index> chosen;
  Subspace<S> acc = inner;
  for (Index i = 0; i < outer.dim(); ++i) {
    Vec<S> v = outer.basis().row(i).transpose();
    if (!acc.contains(v)) {
      chosen.push_back(i);
      Mat<S> stacked(acc.dim() + 1, acc.ambient());
      stacked.topRows(acc.dim()) = acc.basis();
      stacked.row(acc.dim()) = v.transpose();
      acc = Subspace<S>::from_rows(stacked);
    }
  }
  Mat<S> out(static_cast<Index>(chosen.size()), outer.ambient());
  for (std::size_t k = 0; k < chosen.size(); ++k)
    out.row(static_cast<Index>(k)) = outer.basis().row(chosen[k]);
  return out;
}

template <class S>
struct AffineSolution {
  Vec<S> particular;
  Subspace<S> kernel;
};

/// One solution of A x = b plus the kernel, or nullopt when infeasible.
/// Over a finite field the full solution set is particular + kernel span.
template <class S>
std::optional<AffineSolution<S>> solve_affine(const Mat<S>& A, const Vec<S>& b,
                                              const Field<S>& F) {
  Index rows = A.rows(), n = A.cols();
  Mat<S> aug(rows, n + 1);
  aug.leftCols(n) = A;
  aug.col(n) = b;
  auto rr = rref(std::move(aug));
  for (Index i = 0; i < rr.rank; ++i)
    if (rr.pivots[i] == n) return std::nullopt;
  Vec<S> x(n);
  for (Index j = 0; j < n; ++j) x(j) = F.zero();
  for (Index i = 0; i < rr.rank; ++i) x(rr.pivots[i]) = rr.reduced(i, n);
  return AffineSolution<S>{std::move(x), kernel(A, F)};
}

/// Express v in the row basis of `rows` (assumed independent); nullopt if
/// v is outside the span.
template <class S>
std::optional<Vec<S>> coordinates_in(const Mat<S>& rows, const Vec<S>& v,
                                     const Field<S>& F) {
  Mat<S> A(rows.cols(), rows.rows());
  for (Index i = 0; i < rows.rows(); ++i)
    for (Index j = 0; j < rows.cols(); ++j) A(j, i) = rows(i, j);
  auto sol = solve_affine(A, v, F);
  if (!sol) return std::nullopt;
  return sol->particular;
}

template <class S>
Mat<S> identity_matrix(Index n, const Field<S>& F) {
  Mat<S> id(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) id(i, j) = i == j ? F.one() : F.zero();
  return id;
}

template <class S>
Mat<S> zero_matrix(Index r, Index c, const Field<S>& F) {
  Mat<S> m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = F.zero();
  return m;
}

template <class S>
Vec<S> zero_vector(Index n, const Field<S>& F) {
  Vec<S> v(n);
  for (Index i = 0; i < n; ++i) v(i) = F.zero();
  return v;
}

template <class S>
Vec<S> unit_vector(Index n, Index k, const Field<S>& F) {
  Vec<S> v = zero_vector(n, F);
  v(k) = F.one();
  return v;
}

template <class S>
bool is_zero_vec(const Vec<S>& v) {
  for (Index i = 0; i < v.size(); ++i)
    if (!v(i).is_zero()) return false;
  return true;
}

/// Invertibility via rank; n x n only.
template <class S>
bool is_invertible(const Mat<S>& m) {
  return m.rows() == m.cols() && rank(m) == m.rows();
}

template <class S>
std::optional<Mat<S>> inverse_matrix(const Mat<S>& m, const Field<S>& F) {
  Index n = m.rows();
  Mat<S> aug(n, 2 * n);
  aug.leftCols(n) = m;
  aug.rightCols(n) = identity_matrix(n, F);
  auto rr = rref(std::move(aug));
  if (rr.rank < n || rr.pivots[n - 1] >= n) return std::nullopt;
  return Mat<S>(rr.reduced.rightCols(n));
}

}  // namespace uea
