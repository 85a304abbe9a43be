#pragma once

#include <atomic>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uea/assoc_algebra.hpp"
#include "uea/hom.hpp"

namespace uea {

/// Search-facing view of a filtered nilpotent target: an adapted basis split
/// into weight layers together with the bracket (commutator) table on it.
/// Everything of weight above max_weight is zero in the target.
template <class S>
struct LiftTarget {
  Field<S> F;
  Index dim = 0;
  int max_weight = 0;
  std::vector<Index> layer_begin_;      // size max_weight + 2
  std::vector<Vec<S>> comm;             // [i*dim+j] = bracket of basis i and j
  Subspace<S> central;                  // center of the bracket structure
  bool associative = false;             // inner (conjugation) gauge available
  Mat<S> to_original;                   // adapted rows in original coordinates
  std::vector<std::vector<std::pair<Index, S>>> comm_support;  // nonzeros of comm

  void build_support() {
    comm_support.assign(comm.size(), {});
    for (std::size_t e = 0; e < comm.size(); ++e)
      for (Index k = 0; k < dim; ++k)
        if (!comm[e](k).is_zero()) comm_support[e].emplace_back(k, comm[e](k));
  }

  Index layer_begin(int w) const {
    if (w < 1) return 0;
    if (w > max_weight + 1) w = max_weight + 1;
    return layer_begin_[static_cast<std::size_t>(w)];
  }
  Index layer_dim(int w) const {
    if (w < 1 || w > max_weight) return 0;
    return layer_begin(w + 1) - layer_begin(w);
  }
  int weight_of(Index b) const {
    for (int w = 1; w <= max_weight; ++w)
      if (b < layer_begin(w + 1)) return w;
    return max_weight;
  }

  Vec<S> bracket_with_basis(Index mu, const Vec<S>& y) const {
    Vec<S> out = zero_vector(dim, F);
    for (Index j = 0; j < dim; ++j) {
      if (y(j).is_zero()) continue;
      for (auto& [k, c] : comm_support[static_cast<std::size_t>(mu * dim + j)])
        out(k) = out(k) + y(j) * c;
    }
    return out;
  }

  Vec<S> bracket(const Vec<S>& x, const Vec<S>& y) const {
    Vec<S> out = zero_vector(dim, F);
    for (Index i = 0; i < dim; ++i) {
      if (x(i).is_zero()) continue;
      for (Index j = 0; j < dim; ++j) {
        if (y(j).is_zero()) continue;
        const Vec<S>& c = comm[static_cast<std::size_t>(i * dim + j)];
        S f = x(i) * y(j);
        for (Index k = 0; k < dim; ++k) out(k) = out(k) + f * c(k);
      }
    }
    return out;
  }

  Vec<S> component(const Vec<S>& x, int w) const {
    Vec<S> out = zero_vector(dim, F);
    for (Index b = layer_begin(w); b < layer_begin(w + 1); ++b) out(b) = x(b);
    return out;
  }

  /// Bracket via support lists; pays off when both arguments are sparse.
  Vec<S> sparse_bracket(const Vec<S>& x, const Vec<S>& y) const {
    Vec<S> out = zero_vector(dim, F);
    thread_local std::vector<Index> sx, sy;
    sx.clear();
    sy.clear();
    for (Index i = 0; i < dim; ++i)
      if (!x(i).is_zero()) sx.push_back(i);
    for (Index j = 0; j < dim; ++j)
      if (!y(j).is_zero()) sy.push_back(j);
    for (Index i : sx)
      for (Index j : sy) {
        const auto& supp = comm_support[static_cast<std::size_t>(i * dim + j)];
        if (supp.empty()) continue;
        S f = x(i) * y(j);
        for (auto& [k, c] : supp) out(k) = out(k) + f * c;
      }
    return out;
  }
};

template <class S>
LiftTarget<S> make_lift_target(const Envelope<S>& E) {
  E.force_table();
  LiftTarget<S> T;
  T.F = E.field();
  T.dim = E.dim();
  T.max_weight = E.truncation() - 1;
  T.layer_begin_.resize(static_cast<std::size_t>(T.max_weight) + 2);
  for (int w = 1; w <= T.max_weight + 1; ++w)
    T.layer_begin_[static_cast<std::size_t>(w)] = E.layer_begin(w);
  T.layer_begin_[0] = 0;
  T.comm.reserve(static_cast<std::size_t>(T.dim) * T.dim);
  for (Index i = 0; i < T.dim; ++i)
    for (Index j = 0; j < T.dim; ++j) {
      Vec<S> c = E.product(i, j);
      const Vec<S>& q = E.product(j, i);
      for (Index k = 0; k < T.dim; ++k) c(k) = c(k) - q(k);
      T.comm.push_back(std::move(c));
    }
  // center against the weight-1 generators (they generate the algebra)
  Index g = E.generator_count();
  Mat<S> M(g * T.dim, T.dim);
  for (Index gi = 0; gi < g; ++gi)
    for (Index r = 0; r < T.dim; ++r)
      for (Index i = 0; i < T.dim; ++i)
        M(gi * T.dim + r, i) = T.comm[static_cast<std::size_t>(i * T.dim + gi)](r);
  T.central = kernel(M, T.F);
  T.associative = true;
  T.to_original = identity_matrix(T.dim, T.F);
  T.build_support();
  return T;
}

/// Adapted view of a nilpotent associative algebra: basis re-chosen along the
/// power filtration so layer w spans A^w modulo A^{w+1}.
template <class S>
struct AdaptedAssoc {
  LiftTarget<S> target;
  AssocAlgebra<S> adapted;  // the algebra rewritten on the adapted basis
};

template <class S>
AdaptedAssoc<S> make_lift_target(const AssocAlgebra<S>& A) {
  auto powers = power_ideals(A);
  int W = static_cast<int>(powers.size());
  Mat<S> P = zero_matrix(A.dim, A.dim, A.F);
  std::vector<Index> layer_begin(static_cast<std::size_t>(W) + 2, 0);
  Index row = 0;
  for (int w = 1; w <= W; ++w) {
    layer_begin[static_cast<std::size_t>(w)] = row;
    Subspace<S> inner = w < W ? powers[static_cast<std::size_t>(w)]
                              : Subspace<S>::zero(A.dim);
    Mat<S> comp = echelon_complement(inner, powers[static_cast<std::size_t>(w - 1)]);
    for (Index i = 0; i < comp.rows(); ++i) P.row(row++) = comp.row(i);
  }
  layer_begin[static_cast<std::size_t>(W) + 1] = row;
  AdaptedAssoc<S> out;
  out.adapted = assoc_change_basis(A, P);
  LiftTarget<S>& T = out.target;
  T.F = A.F;
  T.dim = A.dim;
  T.max_weight = W;
  T.layer_begin_ = std::move(layer_begin);
  T.comm.reserve(static_cast<std::size_t>(T.dim) * T.dim);
  for (Index i = 0; i < T.dim; ++i)
    for (Index j = 0; j < T.dim; ++j)
      T.comm.push_back(out.adapted.commutator(unit_vector(T.dim, i, T.F),
                                              unit_vector(T.dim, j, T.F)));
  T.central = center(out.adapted);
  T.associative = true;
  T.to_original = P;
  T.build_support();
  return out;
}

template <class S>
LiftTarget<S> make_lift_target_lie(const LieAlgebra<S>& K) {
  LiftTarget<S> T;
  T.F = K.field();
  T.dim = K.dim();
  const auto& w = K.weights();
  T.max_weight = w.back();
  T.layer_begin_.assign(static_cast<std::size_t>(T.max_weight) + 2, T.dim);
  T.layer_begin_[0] = 0;
  for (Index i = T.dim; i-- > 0;)
    T.layer_begin_[static_cast<std::size_t>(w[static_cast<std::size_t>(i)])] = i;
  for (int v = T.max_weight; v >= 1; --v)
    if (T.layer_begin_[static_cast<std::size_t>(v)] >
        T.layer_begin_[static_cast<std::size_t>(v) + 1])
      T.layer_begin_[static_cast<std::size_t>(v)] =
          T.layer_begin_[static_cast<std::size_t>(v) + 1];
  T.comm.reserve(static_cast<std::size_t>(T.dim) * T.dim);
  for (Index i = 0; i < T.dim; ++i)
    for (Index j = 0; j < T.dim; ++j) T.comm.push_back(K.bracket_basis(i, j));
  T.central = lie_center(K);
  T.associative = false;
  T.to_original = identity_matrix(T.dim, T.F);
  T.build_support();
  return T;
}

struct LiftOptions {
  long long node_budget = 100000000;
  bool use_gauge = true;
  bool graded_only = false;  // stop after a consistent graded map is found
  int jobs = 1;
};

struct LiftStats {
  long long nodes = 0;             // degree-1 candidates plus kernel branches
  long long stage_solves = 0;
  long long pruned_by_shadow = 0;
};

enum class LiftStatus { Found, Exhausted, Budget, LayerMismatch };

template <class S>
struct LiftOutcome {
  LiftStatus status = LiftStatus::Exhausted;
  Mat<S> images;  // row k = image of source basis vector k, target coordinates
  LiftStats stats;
  std::string note;
};

/// Depth-first lifting search for a Lie homomorphism from L into a filtered
/// nilpotent target whose induced algebra map is bijective.
///
/// Degree-1 data is enumerated over maps consistent with the graded structure
/// and the center-modulo-squares constraint; each deeper weight layer then
/// adjoins corrections through an exact linear solve, whose solution set is
/// walked as backtrack branches. Corrections of weight s enter every residual
/// of weight <= s linearly because a product of two corrections lands in
/// weight >= s+1; that is what makes each layer a linear system.
template <class S>
class LiftSearch {
public:
  LiftSearch(const LieAlgebra<S>& L, const LiftTarget<S>& T, bool envelope_mode,
             LiftOptions opts)
      : L_(L), T_(T), envelope_mode_(envelope_mode), opts_(opts), F_(T.F) {
    d_ = L_.dim();
    m_ = 0;
    for (int w : L_.weights())
      if (w == 1) ++m_;
    budget_.store(opts_.node_budget);
  }

  LiftOutcome<S> run() {
    LiftOutcome<S> out;
    if (!layers_match()) {
      out.status = LiftStatus::LayerMismatch;
      out.note = "weight layer dimensions differ";
      return out;
    }
    prepare_graded_definitions();
    prepare_shadows();
    prepare_prunable_pairs();
    if (source_shadow_.dim() != target_shadow_.dim()) {
      out.stats.pruned_by_shadow = 1;
      out.note = "center-modulo-squares dimensions differ (" +
                 std::to_string(source_shadow_.dim()) + " vs " +
                 std::to_string(target_shadow_.dim()) + "); no degree-1 candidate";
      out.status = LiftStatus::Exhausted;
      return out;
    }
    if (opts_.jobs > 1 && m_ > 1) return run_parallel();
    columns_.assign(static_cast<std::size_t>(m_), Vec<S>());
    echelon_rows_.clear();
    echelon_pivots_.clear();
    LiftOutcome<S> result;
    result.status = LiftStatus::Exhausted;
    enumerate_column(static_cast<Index>(m_) - 1, result);
    result.stats = stats_;
    if (budget_exceeded_) result.status = LiftStatus::Budget;
    return result;
  }

  /// Block-parallel exploration over the outermost column. Blocks are joined
  /// in enumeration order and the first hit in that order wins, so the
  /// verdict and certificate match the single-threaded run.
  LiftOutcome<S> run_parallel() {
    std::vector<Vec<S>> options = outer_column_options();
    std::atomic<long long> shared_budget(opts_.node_budget);
    LiftOutcome<S> result;
    result.status = LiftStatus::Exhausted;
    bool budget_hit = false;
    std::size_t next = 0;
    while (next < options.size()) {
      std::size_t block = std::min<std::size_t>(static_cast<std::size_t>(opts_.jobs),
                                                options.size() - next);
      std::vector<std::future<LiftOutcome<S>>> futs;
      for (std::size_t b = 0; b < block; ++b) {
        Vec<S> v = options[next + b];
        futs.push_back(std::async(std::launch::async, [this, v, &shared_budget]() {
          LiftSearch<S> sub(L_, T_, envelope_mode_, opts_);
          sub.defs_ = defs_;
          sub.prunable_ = prunable_;
          sub.source_shadow_ = source_shadow_;
          sub.target_shadow_ = target_shadow_;
          sub.shared_budget_ = &shared_budget;
          sub.columns_.assign(static_cast<std::size_t>(sub.m_), Vec<S>());
          LiftOutcome<S> r;
          r.status = LiftStatus::Exhausted;
          sub.place_column(static_cast<Index>(sub.m_) - 1, v, r);
          r.stats = sub.stats_;
          if (sub.budget_exceeded_) r.status = LiftStatus::Budget;
          return r;
        }));
      }
      for (std::size_t b = 0; b < block; ++b) {
        LiftOutcome<S> r = futs[b].get();
        result.stats.nodes += r.stats.nodes;
        result.stats.stage_solves += r.stats.stage_solves;
        result.stats.pruned_by_shadow += r.stats.pruned_by_shadow;
        if (r.status == LiftStatus::Budget) budget_hit = true;
        if (r.status == LiftStatus::Found && result.status != LiftStatus::Found) {
          result.status = LiftStatus::Found;
          result.images = r.images;
        }
      }
      if (result.status == LiftStatus::Found) return result;
      next += block;
    }
    if (budget_hit && result.status != LiftStatus::Found)
      result.status = LiftStatus::Budget;
    return result;
  }

  /// The outermost column's value list in enumeration order, honoring the
  /// shadow coset constraint when it applies to that column.
  std::vector<Vec<S>> outer_column_options() {
    Index col = static_cast<Index>(m_) - 1;
    std::vector<Vec<S>> out;
    std::optional<Index> pivot_vec;
    for (Index i = 0; i < source_shadow_.dim(); ++i) {
      Index lead = -1;
      for (Index c = 0; c < m_; ++c)
        if (!source_shadow_.basis()(i, c).is_zero()) {
          lead = c;
          break;
        }
      if (lead == col) pivot_vec = i;
    }
    if (pivot_vec) {
      Index sd = target_shadow_.dim();
      std::vector<std::int64_t> code(static_cast<std::size_t>(sd), 0);
      for (;;) {
        Vec<S> v = zero_vector(m_, F_);
        for (Index i = 0; i < sd; ++i) {
          S f = F_.element(code[static_cast<std::size_t>(i)]);
          if (f.is_zero()) continue;
          for (Index r = 0; r < m_; ++r)
            v(r) = v(r) + f * target_shadow_.basis()(i, r);
        }
        out.push_back(std::move(v));
        Index pos = sd;
        while (pos > 0 && code[static_cast<std::size_t>(pos - 1)] == F_.order() - 1)
          code[static_cast<std::size_t>(--pos)] = 0;
        if (pos == 0) break;
        ++code[static_cast<std::size_t>(pos - 1)];
      }
      return out;
    }
    std::vector<std::int64_t> code(static_cast<std::size_t>(m_), 0);
    for (;;) {
      Vec<S> v(m_);
      for (Index r = 0; r < m_; ++r)
        v(r) = F_.element(code[static_cast<std::size_t>(r)]);
      out.push_back(std::move(v));
      Index pos = m_;
      while (pos > 0 && code[static_cast<std::size_t>(pos - 1)] == F_.order() - 1)
        code[static_cast<std::size_t>(--pos)] = 0;
      if (pos == 0) break;
      ++code[static_cast<std::size_t>(pos - 1)];
    }
    return out;
  }

private:
  // ---- prechecks -----------------------------------------------------------

  bool layers_match() const {
    if (envelope_mode_) {
      auto counts = weighted_monomial_counts(L_.weights(), T_.max_weight);
      for (int w = 1; w <= T_.max_weight; ++w)
        if (counts[static_cast<std::size_t>(w)] != T_.layer_dim(w)) return false;
      return true;
    }
    for (int w = 1; w <= T_.max_weight; ++w) {
      Index c = 0;
      for (int x : L_.weights())
        if (x == w) ++c;
      if (c != T_.layer_dim(w)) return false;
    }
    int maxw = L_.weights().back();
    return maxw == T_.max_weight;
  }

  /// Degree-1 coordinates of the center: the image of Z modulo the square of
  /// the algebra. Any isomorphism maps one onto the other, so degree-1
  /// candidates must carry source shadow onto target shadow.
  void prepare_shadows() {
    target_shadow_ = shadow_of(T_.central, T_);
    if (envelope_mode_) {
      Envelope<S> src(L_, T_.max_weight + 1);
      LiftTarget<S> st = make_lift_target(src);
      source_shadow_ = shadow_of(st.central, st);
    } else {
      source_shadow_ = shadow_of(lie_center(L_), T_);
    }
  }

  static Subspace<S> shadow_of(const Subspace<S>& central, const LiftTarget<S>& T) {
    Index m = T.layer_dim(1);
    Mat<S> rows(central.dim(), m);
    for (Index i = 0; i < central.dim(); ++i)
      for (Index c = 0; c < m; ++c) rows(i, c) = central.basis()(i, c);
    return Subspace<S>::from_rows(rows);
  }

  Subspace<S> source_shadow_{0, Mat<S>(0, 0)};
  Subspace<S> target_shadow_{0, Mat<S>(0, 0)};

  // ---- graded layer definitions --------------------------------------------

  /// For every source basis element of weight w >= 2, an expression of its
  /// graded class as a combination of brackets of lower-weight basis vectors
  /// (pairs with additive weight exactly w). Exists because the graded
  /// algebra of a nilpotent Lie algebra is generated in degree 1.
  struct GradedDef {
    std::vector<std::pair<Index, Index>> pairs;
    Mat<S> coeffs;  // row per basis element of the layer, col per pair
    std::vector<Index> members;  // source indices of weight w
  };

  void prepare_graded_definitions() {
    const auto& wts = L_.weights();
    int maxw = wts.back();
    defs_.clear();
    for (int w = 2; w <= maxw; ++w) {
      GradedDef def;
      for (Index a = 0; a < d_; ++a)
        for (Index b = a + 1; b < d_; ++b)
          if (wts[static_cast<std::size_t>(a)] + wts[static_cast<std::size_t>(b)] == w)
            def.pairs.emplace_back(a, b);
      for (Index k = 0; k < d_; ++k)
        if (wts[static_cast<std::size_t>(k)] == w) def.members.push_back(k);
      Index rows = static_cast<Index>(def.pairs.size());
      Index cols = static_cast<Index>(def.members.size());
      Mat<S> M(rows, cols);
      for (Index p = 0; p < rows; ++p) {
        Vec<S> br = L_.bracket_basis(def.pairs[static_cast<std::size_t>(p)].first,
                                     def.pairs[static_cast<std::size_t>(p)].second);
        for (Index c = 0; c < cols; ++c)
          M(p, c) = br(def.members[static_cast<std::size_t>(c)]);
      }
      // express each layer unit vector through the pair rows
      def.coeffs = Mat<S>(cols, rows);
      for (Index c = 0; c < cols; ++c) {
        auto sol = solve_affine(Mat<S>(M.transpose().eval()),
                                unit_vector(cols, c, F_), F_);
        if (!sol)
          throw std::runtime_error("graded layer not generated in degree 1");
        def.coeffs.row(c) = sol->particular.transpose();
      }
      defs_.push_back(std::move(def));
    }
  }

  // ---- degree-1 enumeration -------------------------------------------------

  /// Columns are chosen from the last generator to the first, so that the
  /// coset constraint from every shadow basis vector becomes available the
  /// moment its pivot column is placed.
  void enumerate_column(Index col, LiftOutcome<S>& result) {
    if (result.status == LiftStatus::Found || budget_exceeded_) return;
    if (col < 0) {
      if (!consume_node()) return;
      ++stats_.nodes;
      try_candidate(result);
      return;
    }
    std::optional<Index> pivot_vec;
    for (Index i = 0; i < source_shadow_.dim(); ++i) {
      Index lead = -1;
      for (Index c = 0; c < m_; ++c)
        if (!source_shadow_.basis()(i, c).is_zero()) {
          lead = c;
          break;
        }
      if (lead == col) {
        pivot_vec = i;
        break;
      }
    }
    if (pivot_vec) {
      // gamma * v must land in the target shadow; later columns are fixed, so
      // this column ranges over a coset of the target shadow.
      Vec<S> known = zero_vector(m_, F_);
      for (Index c = col + 1; c < m_; ++c) {
        S f = source_shadow_.basis()(*pivot_vec, c);
        if (f.is_zero()) continue;
        const Vec<S>& gc = columns_[static_cast<std::size_t>(c)];
        for (Index r = 0; r < m_; ++r) known(r) = known(r) + f * gc(r);
      }
      Index sd = target_shadow_.dim();
      std::vector<std::int64_t> code(static_cast<std::size_t>(sd), 0);
      for (;;) {
        Vec<S> v = -known;
        for (Index i = 0; i < sd; ++i) {
          S f = F_.element(code[static_cast<std::size_t>(i)]);
          if (f.is_zero()) continue;
          for (Index r = 0; r < m_; ++r)
            v(r) = v(r) + f * target_shadow_.basis()(i, r);
        }
        place_column(col, v, result);
        if (result.status == LiftStatus::Found || budget_exceeded_) return;
        Index pos = sd;
        while (pos > 0 && code[static_cast<std::size_t>(pos - 1)] == F_.order() - 1)
          code[static_cast<std::size_t>(--pos)] = 0;
        if (pos == 0) break;
        ++code[static_cast<std::size_t>(pos - 1)];
      }
      return;
    }
    std::vector<std::int64_t> code(static_cast<std::size_t>(m_), 0);
    for (;;) {
      Vec<S> v(m_);
      for (Index r = 0; r < m_; ++r)
        v(r) = F_.element(code[static_cast<std::size_t>(r)]);
      place_column(col, v, result);
      if (result.status == LiftStatus::Found || budget_exceeded_) return;
      Index pos = m_;
      while (pos > 0 && code[static_cast<std::size_t>(pos - 1)] == F_.order() - 1)
        code[static_cast<std::size_t>(--pos)] = 0;
      if (pos == 0) break;
      ++code[static_cast<std::size_t>(pos - 1)];
    }
  }

  /// Weight-1 relation pairs whose bracket has no weight-2 component: their
  /// graded condition says the degree-1 images must commute into weight >= 3,
  /// which is checkable as soon as both columns are placed.
  void prepare_prunable_pairs() {
    prunable_.clear();
    const auto& wts = L_.weights();
    for (Index a = 0; a < m_; ++a)
      for (Index b = a + 1; b < m_; ++b) {
        if (wts[static_cast<std::size_t>(a)] != 1 ||
            wts[static_cast<std::size_t>(b)] != 1)
          continue;
        Vec<S> br = L_.bracket_basis(a, b);
        bool clean = true;
        for (Index k = 0; k < d_; ++k)
          if (!br(k).is_zero() && wts[static_cast<std::size_t>(k)] == 2)
            clean = false;
        if (clean) prunable_.emplace_back(a, b);
      }
  }

  /// Weight-2 slice of the target bracket of two degree-1 column vectors.
  bool columns_commute_above_weight2(const Vec<S>& x, const Vec<S>& y) const {
    Index lb = T_.layer_begin(2), ld = T_.layer_dim(2);
    for (Index r = 0; r < ld; ++r) {
      S acc = F_.zero();
      for (Index i = 0; i < m_; ++i) {
        if (x(i).is_zero()) continue;
        for (Index j = 0; j < m_; ++j) {
          if (y(j).is_zero()) continue;
          acc = acc + x(i) * y(j) * T_.comm[static_cast<std::size_t>(i * T_.dim + j)](lb + r);
        }
      }
      if (!acc.is_zero()) return false;
    }
    return true;
  }

  void place_column(Index col, const Vec<S>& v, LiftOutcome<S>& result) {
    // partial independence check against the rows chosen so far
    Vec<S> red = v;
    for (std::size_t r = 0; r < echelon_rows_.size(); ++r) {
      S f = red(echelon_pivots_[r]);
      if (f.is_zero()) continue;
      for (Index c = 0; c < m_; ++c) red(c) = red(c) - f * echelon_rows_[r](c);
    }
    Index lead = -1;
    for (Index c = 0; c < m_; ++c)
      if (!red(c).is_zero()) {
        lead = c;
        break;
      }
    if (lead < 0) return;  // dependent column
    for (auto& [a, b] : prunable_) {
      Index other = a == col ? b : (b == col ? a : -1);
      if (other < 0 || other < col) continue;  // other not placed yet
      const Vec<S>& w = columns_[static_cast<std::size_t>(other)];
      bool ok = a == col ? columns_commute_above_weight2(v, w) : columns_commute_above_weight2(w, v);
      if (!ok) return;
    }
    S inv = red(lead).inverse();
    for (Index c = lead; c < m_; ++c) red(c) = red(c) * inv;
    echelon_rows_.push_back(std::move(red));
    echelon_pivots_.push_back(lead);
    columns_[static_cast<std::size_t>(col)] = v;
    enumerate_column(col - 1, result);
    echelon_rows_.pop_back();
    echelon_pivots_.pop_back();
  }

  // ---- one full degree-1 candidate -----------------------------------------

  void try_candidate(LiftOutcome<S>& result) {
    // shadow constraint for vectors whose pivot rule did not cover them
    for (Index i = 0; i < source_shadow_.dim(); ++i) {
      Vec<S> img = zero_vector(m_, F_);
      for (Index c = 0; c < m_; ++c) {
        S f = source_shadow_.basis()(i, c);
        if (f.is_zero()) continue;
        for (Index r = 0; r < m_; ++r)
          img(r) = img(r) + f * columns_[static_cast<std::size_t>(c)](r);
      }
      if (!target_shadow_.contains(img)) {
        ++stats_.pruned_by_shadow;
        return;
      }
    }
    // graded images of all basis vectors
    Mat<S> lead = zero_matrix(d_, T_.dim, F_);
    Index g1 = 0;
    for (Index k = 0; k < d_; ++k) {
      if (L_.weights()[static_cast<std::size_t>(k)] != 1) continue;
      for (Index r = 0; r < m_; ++r)
        lead(k, T_.layer_begin(1) + r) = columns_[static_cast<std::size_t>(g1)](r);
      ++g1;
    }
    const auto& wts = L_.weights();
    for (const auto& def : defs_) {
      int w = def.members.empty()
                  ? 0
                  : wts[static_cast<std::size_t>(def.members.front())];
      if (w > T_.max_weight) {
        continue;  // images of deeper layers vanish in the truncation
      }
      std::vector<Vec<S>> pair_brackets;
      pair_brackets.reserve(def.pairs.size());
      for (auto& [a, b] : def.pairs)
        pair_brackets.push_back(T_.component(
            T_.sparse_bracket(lead.row(a).transpose(), lead.row(b).transpose()), w));
      for (Index c = 0; c < static_cast<Index>(def.members.size()); ++c) {
        Vec<S> img = zero_vector(T_.dim, F_);
        for (Index p = 0; p < static_cast<Index>(def.pairs.size()); ++p) {
          S f = def.coeffs(c, p);
          if (f.is_zero()) continue;
          const Vec<S>& pb = pair_brackets[static_cast<std::size_t>(p)];
          for (Index r = 0; r < T_.dim; ++r) img(r) = img(r) + f * pb(r);
        }
        lead.row(def.members[static_cast<std::size_t>(c)]) = img.transpose();
      }
    }
    // graded consistency of every relation
    for (Index i = 0; i < d_; ++i)
      for (Index j = i + 1; j < d_; ++j) {
        int v = wts[static_cast<std::size_t>(i)] + wts[static_cast<std::size_t>(j)];
        if (v > T_.max_weight) continue;
        Vec<S> r = T_.sparse_bracket(lead.row(i).transpose(), lead.row(j).transpose());
        Vec<S> rhs = L_.bracket_basis(i, j);
        for (Index k = 0; k < d_; ++k) {
          if (rhs(k).is_zero()) continue;
          for (Index b = 0; b < T_.dim; ++b)
            r(b) = r(b) - rhs(k) * lead(k, b);
        }
        if (!is_zero_vec(Vec<S>(T_.component(r, v)))) return;
      }
    if (opts_.graded_only) {
      result.status = LiftStatus::Found;
      result.images = lead;
      return;
    }
    lead_ = lead;
    phi_ = lead;
    bracket_cache_.clear();
    if (lift_stage(2)) {
      result.status = LiftStatus::Found;
      result.images = phi_;
    }
  }

  // ---- correction stages ----------------------------------------------------

  struct Blocks {
    std::vector<Index> offset;  // per source index; -1 when absent
    std::vector<Index> size;
    Index total = 0;
  };

  Blocks stage_blocks(int s) const {
    Blocks bl;
    bl.offset.assign(static_cast<std::size_t>(d_), -1);
    bl.size.assign(static_cast<std::size_t>(d_), 0);
    for (Index k = 0; k < d_; ++k) {
      int layer = L_.weights()[static_cast<std::size_t>(k)] + s - 1;
      Index sz = T_.layer_dim(layer);
      if (sz == 0) continue;
      bl.offset[static_cast<std::size_t>(k)] = bl.total;
      bl.size[static_cast<std::size_t>(k)] = sz;
      bl.total += sz;
    }
    return bl;
  }

  /// Rows [e_mu, lead_k] for all mu in one target layer, cached per candidate.
  const Mat<S>& lead_brackets(Index k, int layer) {
    auto key = std::make_pair(k, layer);
    auto it = bracket_cache_.find(key);
    if (it != bracket_cache_.end()) return it->second;
    Index lb = T_.layer_begin(layer), sz = T_.layer_dim(layer);
    Mat<S> rows(sz, T_.dim);
    for (Index u = 0; u < sz; ++u)
      rows.row(u) = T_.bracket_with_basis(lb + u, lead_.row(k).transpose()).transpose();
    return bracket_cache_.emplace(key, std::move(rows)).first->second;
  }

  bool lift_stage(int s) {
    int s_max = T_.max_weight - 1;
    if (s > s_max) return true;
    Blocks bl = stage_blocks(s);
    if (bl.total == 0) return lift_stage(s + 1);
    ++stats_.stage_solves;

    // incremental echelon over bl.total + 1 augmented columns, aborting on
    // the first inconsistent row
    std::vector<Vec<S>> sys_rows;
    std::vector<Index> sys_pivots;
    auto reduce_and_insert = [&](Vec<S> row) -> bool {
      for (std::size_t r = 0; r < sys_rows.size(); ++r) {
        Index p = sys_pivots[r];
        if (!row(p).is_zero()) {
          S f = row(p);
          for (Index c = p; c <= bl.total; ++c)
            row(c) = row(c) - f * sys_rows[r](c);
        }
      }
      Index lead = -1;
      for (Index c = 0; c <= bl.total; ++c)
        if (!row(c).is_zero()) {
          lead = c;
          break;
        }
      if (lead < 0) return true;
      if (lead == bl.total) return false;
      S inv = row(lead).inverse();
      for (Index c = lead; c <= bl.total; ++c) row(c) = row(c) * inv;
      for (std::size_t r = 0; r < sys_rows.size(); ++r) {
        S f = sys_rows[r](lead);
        if (f.is_zero()) continue;
        for (Index c = lead; c <= bl.total; ++c)
          sys_rows[r](c) = sys_rows[r](c) - f * row(c);
      }
      sys_rows.push_back(std::move(row));
      sys_pivots.push_back(lead);
      return true;
    };

    // relations ordered by descending pair weight: the tighter constraints
    // (generator against derived element) tend to kill candidates first
    std::vector<std::pair<Index, Index>> order;
    for (Index i = 0; i < d_; ++i)
      for (Index j = i + 1; j < d_; ++j) order.emplace_back(i, j);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      int wa = L_.weights()[static_cast<std::size_t>(a.first)] +
               L_.weights()[static_cast<std::size_t>(a.second)];
      int wb = L_.weights()[static_cast<std::size_t>(b.first)] +
               L_.weights()[static_cast<std::size_t>(b.second)];
      return wa > wb;
    });

    const auto& wts = L_.weights();
    for (auto& [i, j] : order) {
      int wij = wts[static_cast<std::size_t>(i)] + wts[static_cast<std::size_t>(j)];
      int v = wij + s - 1;
      if (v > T_.max_weight) continue;
      // residual of the relation with the current partial images
      Vec<S> resid = T_.sparse_bracket(phi_.row(i).transpose(), phi_.row(j).transpose());
      Vec<S> rhs = L_.bracket_basis(i, j);
      for (Index k = 0; k < d_; ++k) {
        if (rhs(k).is_zero()) continue;
        for (Index b = 0; b < T_.dim; ++b) resid(b) = resid(b) - rhs(k) * phi_(k, b);
      }
      Index vb = T_.layer_begin(v), vd = T_.layer_dim(v);
      if (vd == 0) continue;
      const Mat<S>* bi = nullptr;  // [e_mu, lead_j] for mu in layer w_i + s - 1
      const Mat<S>* bj = nullptr;  // [e_mu, lead_i] for mu in layer w_j + s - 1
      if (bl.size[static_cast<std::size_t>(i)] > 0)
        bi = &lead_brackets(j, wts[static_cast<std::size_t>(i)] + s - 1);
      if (bl.size[static_cast<std::size_t>(j)] > 0)
        bj = &lead_brackets(i, wts[static_cast<std::size_t>(j)] + s - 1);
      for (Index r = 0; r < vd; ++r) {
        Vec<S> row = zero_vector(bl.total + 1, F_);
        bool nonzero = false;
        if (bi)
          for (Index u = 0; u < bl.size[static_cast<std::size_t>(i)]; ++u) {
            S c = (*bi)(u, vb + r);
            if (c.is_zero()) continue;
            row(bl.offset[static_cast<std::size_t>(i)] + u) =
                row(bl.offset[static_cast<std::size_t>(i)] + u) + c;
            nonzero = true;
          }
        if (bj)
          for (Index u = 0; u < bl.size[static_cast<std::size_t>(j)]; ++u) {
            S c = (*bj)(u, vb + r);
            if (c.is_zero()) continue;
            row(bl.offset[static_cast<std::size_t>(j)] + u) =
                row(bl.offset[static_cast<std::size_t>(j)] + u) - c;
            nonzero = true;
          }
        for (Index k = 0; k < d_; ++k) {
          if (rhs(k).is_zero()) continue;
          if (wts[static_cast<std::size_t>(k)] != wij) continue;
          if (bl.size[static_cast<std::size_t>(k)] == 0) continue;
          // unknown correction to phi_k sits exactly in layer v
          row(bl.offset[static_cast<std::size_t>(k)] + r) =
              row(bl.offset[static_cast<std::size_t>(k)] + r) - rhs(k);
          nonzero = true;
        }
        S b = -resid(vb + r);
        row(bl.total) = b;
        if (!nonzero && b.is_zero()) continue;
        if (!reduce_and_insert(std::move(row))) return false;  // infeasible
      }
    }

    // particular solution: pivot unknowns take the rhs value, free are zero
    Vec<S> particular = zero_vector(bl.total, F_);
    for (std::size_t r = 0; r < sys_rows.size(); ++r)
      if (sys_pivots[r] < bl.total) particular(sys_pivots[r]) = sys_rows[r](bl.total);
    // kernel basis from the free columns
    std::vector<bool> is_pivot(static_cast<std::size_t>(bl.total), false);
    for (Index p : sys_pivots)
      if (p < bl.total) is_pivot[static_cast<std::size_t>(p)] = true;
    std::vector<Vec<S>> ker;
    for (Index c = 0; c < bl.total; ++c) {
      if (is_pivot[static_cast<std::size_t>(c)]) continue;
      Vec<S> k = zero_vector(bl.total, F_);
      k(c) = F_.one();
      for (std::size_t r = 0; r < sys_rows.size(); ++r)
        if (sys_pivots[r] < bl.total) k(sys_pivots[r]) = -sys_rows[r](c);
      ker.push_back(std::move(k));
    }

    int s_last = s_max;
    if (s == s_last || ker.empty()) {
      // nothing later depends on the kernel choice; take the particular point
      return descend(s, bl, particular);
    }

    // quotient the kernel by gauge directions before branching
    std::vector<Vec<S>> enum_dirs = ker;
    if (opts_.use_gauge) enum_dirs = gauge_reduced(s, bl, ker);
    std::vector<std::int64_t> code(enum_dirs.size(), 0);
    for (;;) {
      if (!consume_node()) return false;
      ++stats_.nodes;
      Vec<S> u = particular;
      for (std::size_t i = 0; i < enum_dirs.size(); ++i) {
        S f = F_.element(code[i]);
        if (f.is_zero()) continue;
        for (Index c = 0; c < bl.total; ++c) u(c) = u(c) + f * enum_dirs[i](c);
      }
      if (descend(s, bl, u)) return true;
      if (budget_exceeded_) return false;
      std::size_t pos = code.size();
      while (pos > 0 && code[pos - 1] == F_.order() - 1) code[--pos] = 0;
      if (pos == 0) break;
      ++code[pos - 1];
    }
    return false;
  }

  bool descend(int s, const Blocks& bl, const Vec<S>& u) {
    // apply the corrections, recurse, undo
    for (Index k = 0; k < d_; ++k) {
      Index off = bl.offset[static_cast<std::size_t>(k)];
      if (off < 0) continue;
      int layer = L_.weights()[static_cast<std::size_t>(k)] + s - 1;
      Index lb = T_.layer_begin(layer);
      for (Index c = 0; c < bl.size[static_cast<std::size_t>(k)]; ++c)
        phi_(k, lb + c) = phi_(k, lb + c) + u(off + c);
    }
    bool ok = lift_stage(s + 1);
    if (!ok) {
      for (Index k = 0; k < d_; ++k) {
        Index off = bl.offset[static_cast<std::size_t>(k)];
        if (off < 0) continue;
        int layer = L_.weights()[static_cast<std::size_t>(k)] + s - 1;
        Index lb = T_.layer_begin(layer);
        for (Index c = 0; c < bl.size[static_cast<std::size_t>(k)]; ++c)
          phi_(k, lb + c) = phi_(k, lb + c) - u(off + c);
      }
    }
    return ok;
  }

  /// Basis of a complement of the gauge directions inside the kernel: branch
  /// choices differing by a gauge vector extend identically, so only coset
  /// representatives are walked.
  ///
  /// Two sound sources of gauge: conjugation by 1 + e_mu (weight s-1) on an
  /// associative target, which shifts every image by [e_mu, lead_k] in layer
  /// w_k + s - 1; and adding a central weight-s element to the image of a
  /// weight-1 generator, which no residual can see.
  std::vector<Vec<S>> gauge_reduced(int s, const Blocks& bl,
                                    const std::vector<Vec<S>>& ker) {
    std::vector<Vec<S>> gauge;
    if (T_.associative && s >= 2) {
      Index lb = T_.layer_begin(s - 1), ld = T_.layer_dim(s - 1);
      for (Index u = 0; u < ld; ++u) {
        Vec<S> g = zero_vector(bl.total, F_);
        bool nonzero = false;
        for (Index k = 0; k < d_; ++k) {
          Index off = bl.offset[static_cast<std::size_t>(k)];
          if (off < 0) continue;
          int layer = L_.weights()[static_cast<std::size_t>(k)] + s - 1;
          Vec<S> shift = T_.bracket_with_basis(lb + u, lead_.row(k).transpose());
          Index b0 = T_.layer_begin(layer);
          for (Index c = 0; c < bl.size[static_cast<std::size_t>(k)]; ++c) {
            g(off + c) = shift(b0 + c);
            if (!g(off + c).is_zero()) nonzero = true;
          }
        }
        if (nonzero) gauge.push_back(std::move(g));
      }
    }
    // central shifts on weight-1 generators
    for (Index zi = 0; zi < T_.central.dim(); ++zi) {
      Vec<S> z = T_.central.basis().row(zi).transpose();
      Vec<S> zs = T_.component(z, s);
      if (is_zero_vec(zs)) continue;
      if (!T_.central.contains(zs)) continue;  // need a purely layer-s central element
      for (Index k = 0; k < d_; ++k) {
        if (L_.weights()[static_cast<std::size_t>(k)] != 1) continue;
        Index off = bl.offset[static_cast<std::size_t>(k)];
        if (off < 0) continue;
        Vec<S> g = zero_vector(bl.total, F_);
        Index b0 = T_.layer_begin(s);
        for (Index c = 0; c < bl.size[static_cast<std::size_t>(k)]; ++c)
          g(off + c) = zs(b0 + c);
        gauge.push_back(std::move(g));
      }
    }
    if (gauge.empty()) return ker;
    Mat<S> gm(static_cast<Index>(gauge.size()), bl.total);
    for (std::size_t i = 0; i < gauge.size(); ++i) gm.row(static_cast<Index>(i)) = gauge[i].transpose();
    Mat<S> km(static_cast<Index>(ker.size()), bl.total);
    for (std::size_t i = 0; i < ker.size(); ++i) km.row(static_cast<Index>(i)) = ker[i].transpose();
    Subspace<S> kersp = Subspace<S>::from_rows(km);
    Subspace<S> inker = span_intersect(Subspace<S>::from_rows(gm), kersp, F_);
    Mat<S> comp = echelon_complement(inker, kersp);
    std::vector<Vec<S>> out;
    for (Index i = 0; i < comp.rows(); ++i) out.push_back(comp.row(i).transpose());
    return out;
  }

  bool consume_node() {
    std::atomic<long long>& budget = shared_budget_ ? *shared_budget_ : budget_;
    long long left = budget.fetch_sub(1) - 1;
    if (left < 0) {
      budget_exceeded_ = true;
      return false;
    }
    return true;
  }

  const LieAlgebra<S>& L_;
  const LiftTarget<S>& T_;
  bool envelope_mode_;
  LiftOptions opts_;
  Field<S> F_;
  Index d_ = 0;
  Index m_ = 0;

  std::vector<GradedDef> defs_;
  std::vector<std::pair<Index, Index>> prunable_;
  std::vector<Vec<S>> columns_;
  std::vector<Vec<S>> echelon_rows_;
  std::vector<Index> echelon_pivots_;
  Mat<S> lead_{0, 0};
  Mat<S> phi_{0, 0};
  std::map<std::pair<Index, int>, Mat<S>> bracket_cache_;
  LiftStats stats_;
  std::atomic<long long> budget_{0};
  std::atomic<long long>* shared_budget_ = nullptr;
  bool budget_exceeded_ = false;
};

template <class S>
LiftOutcome<S> lift_search(const LieAlgebra<S>& L, const LiftTarget<S>& T,
                           bool envelope_mode, const LiftOptions& opts) {
  LiftSearch<S> search(L, T, envelope_mode, opts);
  return search.run();
}

}  // namespace uea
