#pragma once

#include <array>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uea/lie_io.hpp"
#include "uea/linalg.hpp"
#include "uea/pbw.hpp"

namespace uea {

struct NotAnIdealError : std::runtime_error {
  NotAnIdealError() : std::runtime_error("subspace is not a two-sided ideal") {}
};

/// Finite-dimensional associative algebra by structure constants. The stored
/// generating set is used by the center computation; the basis itself is
/// always a valid (if wasteful) choice.
template <class S>
struct AssocAlgebra {
  Field<S> F;
  Index dim = 0;
  std::vector<Vec<S>> table;       // [i * dim + j] = e_i * e_j
  std::vector<Index> generators;
  std::vector<int> weight_of;      // envelope provenance; empty otherwise

  const Vec<S>& product(Index i, Index j) const {
    return table[static_cast<std::size_t>(i * dim + j)];
  }

  Vec<S> mult(const Vec<S>& x, const Vec<S>& y) const {
    Vec<S> out = zero_vector(dim, F);
    for (Index i = 0; i < dim; ++i) {
      if (x(i).is_zero()) continue;
      for (Index j = 0; j < dim; ++j) {
        if (y(j).is_zero()) continue;
        S c = x(i) * y(j);
        const Vec<S>& p = product(i, j);
        for (Index k = 0; k < dim; ++k) out(k) = out(k) + c * p(k);
      }
    }
    return out;
  }

  Vec<S> commutator(const Vec<S>& x, const Vec<S>& y) const {
    Vec<S> ab = mult(x, y), ba = mult(y, x);
    for (Index k = 0; k < dim; ++k) ab(k) = ab(k) - ba(k);
    return ab;
  }
};

template <class S>
AssocAlgebra<S> envelope_to_assoc(const Envelope<S>& E) {
  E.force_table();
  AssocAlgebra<S> A;
  A.F = E.field();
  A.dim = E.dim();
  A.table.reserve(static_cast<std::size_t>(A.dim) * A.dim);
  for (Index i = 0; i < A.dim; ++i)
    for (Index j = 0; j < A.dim; ++j) A.table.push_back(E.product(i, j));
  for (Index g = 0; g < E.generator_count(); ++g) A.generators.push_back(g);
  A.weight_of.resize(static_cast<std::size_t>(A.dim));
  for (Index b = 0; b < A.dim; ++b)
    A.weight_of[static_cast<std::size_t>(b)] = E.weight_of(b);
  return A;
}

/// First failing triple ((e_i e_j) e_k != e_i (e_j e_k)), if any. Skipped with
/// a warning above the dimension cap: the check is quartic in the dimension.
template <class S>
std::optional<std::array<Index, 3>> associativity_defect(const AssocAlgebra<S>& A,
                                                         Index cap = 80) {
  if (A.dim > cap) return std::nullopt;
  for (Index i = 0; i < A.dim; ++i)
    for (Index j = 0; j < A.dim; ++j)
      for (Index k = 0; k < A.dim; ++k) {
        Vec<S> lhs = A.mult(A.product(i, j), unit_vector(A.dim, k, A.F));
        Vec<S> rhs = A.mult(unit_vector(A.dim, i, A.F), A.product(j, k));
        for (Index t = 0; t < A.dim; ++t)
          if (lhs(t) != rhs(t)) return std::array<Index, 3>{i, j, k};
      }
  return std::nullopt;
}

/// Center as the kernel of the stacked commutator maps against the stored
/// generating set: an element commuting with a generating set commutes with
/// every product of generators, hence with all of A.
template <class S>
Subspace<S> center(const AssocAlgebra<S>& A) {
  Index d = A.dim;
  Index g = static_cast<Index>(A.generators.size());
  Mat<S> M(g * d, d);
  for (Index gi = 0; gi < g; ++gi) {
    Index gen = A.generators[static_cast<std::size_t>(gi)];
    for (Index r = 0; r < d; ++r)
      for (Index i = 0; i < d; ++i)
        M(gi * d + r, i) = A.product(i, gen)(r) - A.product(gen, i)(r);
  }
  return kernel(M, A.F);
}

/// Power ideals A = A^1 >= A^2 >= ...; returns the nonzero terms. Throws for
/// non-nilpotent input (the chain must strictly decrease to zero).
template <class S>
std::vector<Subspace<S>> power_ideals(const AssocAlgebra<S>& A) {
  std::vector<Subspace<S>> out;
  out.push_back(Subspace<S>::full(A.dim, A.F));
  for (;;) {
    const Subspace<S>& cur = out.back();
    Mat<S> rows(cur.dim() * A.dim, A.dim);
    Index r = 0;
    for (Index b = 0; b < cur.dim(); ++b) {
      Vec<S> v = cur.basis().row(b).transpose();
      for (Index j = 0; j < A.dim; ++j)
        rows.row(r++) = A.mult(v, unit_vector(A.dim, j, A.F)).transpose();
    }
    Subspace<S> next = Subspace<S>::from_rows(rows);
    if (next.dim() == 0) break;
    if (next.dim() == cur.dim()) throw NotNilpotentError();
    out.push_back(std::move(next));
  }
  return out;
}

/// Smallest t with A^t = 0.
template <class S>
int nilpotency_index(const AssocAlgebra<S>& A) {
  return static_cast<int>(power_ideals(A).size()) + 1;
}

/// Two-sided ideal generated by the rows of `gens`.
template <class S>
Subspace<S> ideal_generated_by(const AssocAlgebra<S>& A, const Mat<S>& gens) {
  Subspace<S> cur = Subspace<S>::from_rows(gens);
  for (;;) {
    Mat<S> rows(cur.dim() * (2 * A.dim) + cur.dim(), A.dim);
    Index r = 0;
    for (Index b = 0; b < cur.dim(); ++b) {
      Vec<S> v = cur.basis().row(b).transpose();
      rows.row(r++) = v.transpose();
      for (Index j = 0; j < A.dim; ++j) {
        rows.row(r++) = A.mult(v, unit_vector(A.dim, j, A.F)).transpose();
        rows.row(r++) = A.mult(unit_vector(A.dim, j, A.F), v).transpose();
      }
    }
    Subspace<S> next = Subspace<S>::from_rows(rows);
    if (next.dim() == cur.dim()) return next;
    cur = std::move(next);
  }
}

template <class S>
bool is_two_sided_ideal(const AssocAlgebra<S>& A, const Subspace<S>& I) {
  for (Index b = 0; b < I.dim(); ++b) {
    Vec<S> v = I.basis().row(b).transpose();
    for (Index j = 0; j < A.dim; ++j) {
      if (!I.contains(A.mult(v, unit_vector(A.dim, j, A.F)))) return false;
      if (!I.contains(A.mult(unit_vector(A.dim, j, A.F), v))) return false;
    }
  }
  return true;
}

template <class S>
struct QuotientAlgebra {
  AssocAlgebra<S> algebra;
  Mat<S> section;  // rows = complement basis of the ideal, in old coordinates
};

/// Quotient by a two-sided ideal, on the deterministic echelon complement.
template <class S>
QuotientAlgebra<S> quotient_algebra(const AssocAlgebra<S>& A, const Subspace<S>& I) {
  if (!is_two_sided_ideal(A, I)) throw NotAnIdealError();
  Mat<S> comp = echelon_complement(I, Subspace<S>::full(A.dim, A.F));
  Index nd = comp.rows();
  Mat<S> mixed(nd + I.dim(), A.dim);
  mixed.topRows(nd) = comp;
  mixed.bottomRows(I.dim()) = I.basis();
  QuotientAlgebra<S> out;
  out.section = comp;
  out.algebra.F = A.F;
  out.algebra.dim = nd;
  out.algebra.table.reserve(static_cast<std::size_t>(nd) * nd);
  for (Index i = 0; i < nd; ++i)
    for (Index j = 0; j < nd; ++j) {
      Vec<S> p = A.mult(comp.row(i).transpose(), comp.row(j).transpose());
      auto coords = coordinates_in(mixed, p, A.F);
      if (!coords) throw std::runtime_error("quotient product escaped the basis");
      out.algebra.table.push_back(coords->topRows(nd));
    }
  for (Index i = 0; i < nd; ++i) out.algebra.generators.push_back(i);
  return out;
}

struct Fingerprint {
  std::vector<Index> power_dims;         // dim A^i for the nonzero terms
  Index center_dim = 0;
  std::vector<Index> center_mod_powers;  // dim (Z + A^j)/A^j, j = 2..nilindex
  std::vector<Index> center_meet_powers; // dim (Z meet A^j),  j = 2..nilindex

  friend bool operator==(const Fingerprint& a, const Fingerprint& b) {
    return a.power_dims == b.power_dims && a.center_dim == b.center_dim &&
           a.center_mod_powers == b.center_mod_powers &&
           a.center_meet_powers == b.center_meet_powers;
  }

  /// Name of the first differing component, for non-isomorphism witnesses.
  static std::string first_difference(const Fingerprint& a, const Fingerprint& b) {
    auto vec_diff = [](const std::vector<Index>& x, const std::vector<Index>& y,
                       const std::string& label) -> std::string {
      if (x.size() != y.size()) return label + " length";
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != y[i])
          return label + "[" + std::to_string(i + 2) + "]=" +
                 std::to_string(x[i]) + " vs " + std::to_string(y[i]);
      return "";
    };
    if (a.power_dims != b.power_dims) {
      for (std::size_t i = 0; i < std::min(a.power_dims.size(), b.power_dims.size()); ++i)
        if (a.power_dims[i] != b.power_dims[i])
          return "power_dims[" + std::to_string(i + 1) + "]=" +
                 std::to_string(a.power_dims[i]) + " vs " +
                 std::to_string(b.power_dims[i]);
      return "power_dims length";
    }
    if (a.center_dim != b.center_dim)
      return "center_dim=" + std::to_string(a.center_dim) + " vs " +
             std::to_string(b.center_dim);
    std::string d = vec_diff(a.center_mod_powers, b.center_mod_powers,
                             "center_mod_powers");
    if (!d.empty()) return d;
    d = vec_diff(a.center_meet_powers, b.center_meet_powers, "center_meet_powers");
    if (!d.empty()) return d;
    return "";
  }

  std::string str() const {
    std::ostringstream os;
    os << "powers(";
    for (std::size_t i = 0; i < power_dims.size(); ++i)
      os << (i ? "," : "") << power_dims[i];
    os << ") center " << center_dim << " mod(";
    for (std::size_t i = 0; i < center_mod_powers.size(); ++i)
      os << (i ? "," : "") << center_mod_powers[i];
    os << ") meet(";
    for (std::size_t i = 0; i < center_meet_powers.size(); ++i)
      os << (i ? "," : "") << center_meet_powers[i];
    os << ")";
    return os.str();
  }
};

/// Isomorphism-invariant dimension tuple: power ideal dims, center dim, and
/// the center's interaction with each power ideal. Equal fingerprints are
/// necessary, never sufficient, for isomorphism.
template <class S>
Fingerprint fingerprint(const AssocAlgebra<S>& A) {
  Fingerprint fp;
  auto powers = power_ideals(A);
  for (const auto& p : powers) fp.power_dims.push_back(p.dim());
  Subspace<S> Z = center(A);
  fp.center_dim = Z.dim();
  int nilindex = static_cast<int>(powers.size()) + 1;
  for (int j = 2; j <= nilindex; ++j) {
    Subspace<S> Aj = j <= static_cast<int>(powers.size())
                         ? powers[static_cast<std::size_t>(j - 1)]
                         : Subspace<S>::zero(A.dim);
    fp.center_mod_powers.push_back(span_sum(Z, Aj).dim() - Aj.dim());
    fp.center_meet_powers.push_back(span_intersect(Z, Aj, A.F).dim());
  }
  return fp;
}

/// Conjugate the multiplication table by an invertible change of basis
/// (rows of P = new basis in old coordinates).
template <class S>
AssocAlgebra<S> assoc_change_basis(const AssocAlgebra<S>& A, const Mat<S>& P) {
  AssocAlgebra<S> out;
  out.F = A.F;
  out.dim = A.dim;
  out.table.reserve(static_cast<std::size_t>(A.dim) * A.dim);
  for (Index i = 0; i < A.dim; ++i)
    for (Index j = 0; j < A.dim; ++j) {
      Vec<S> p = A.mult(P.row(i).transpose(), P.row(j).transpose());
      auto coords = coordinates_in(P, p, A.F);
      if (!coords) throw std::runtime_error("basis change is not invertible");
      out.table.push_back(*coords);
    }
  for (Index i = 0; i < A.dim; ++i) out.generators.push_back(i);
  return out;
}

/// Associative algebra file format: like the Lie format with an `assoc`
/// header and `e.i * e.j = ...` product lines; omitted products are zero.
template <class S>
AssocAlgebra<S> parse_assoc(const std::string& text, const Field<S>& F) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_assoc = false, saw_field = false, saw_dim = false;
  AssocAlgebra<S> A;
  A.F = F;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = detail::drop_comment(line);
    if (s.empty()) continue;
    if (s == "assoc") {
      saw_assoc = true;
      continue;
    }
    if (!saw_assoc) throw ParseError(line_no, "expected 'assoc' header");
    if (s.rfind("field", 0) == 0) {
      auto fs = FieldSpec::parse(detail::strip(s.substr(5)));
      if (!fs || *fs != F.spec) throw ParseError(line_no, "field mismatch");
      saw_field = true;
      continue;
    }
    if (!saw_field) throw ParseError(line_no, "field must precede this line");
    if (s.rfind("dim", 0) == 0) {
      A.dim = std::stoll(detail::strip(s.substr(3)));
      if (A.dim <= 0) throw ParseError(line_no, "dimension must be positive");
      A.table.assign(static_cast<std::size_t>(A.dim) * A.dim,
                     zero_vector(A.dim, F));
      saw_dim = true;
      continue;
    }
    if (!saw_dim) throw ParseError(line_no, "dim must precede this line");
    std::string compact = detail::remove_spaces(s);
    // e.i*e.j=rhs
    if (compact.rfind("e.", 0) != 0) throw ParseError(line_no, "expected e.i * e.j = ...");
    auto star = compact.find('*');
    auto eq = compact.find('=');
    if (star == std::string::npos || eq == std::string::npos || star > eq)
      throw ParseError(line_no, "malformed product line");
    Index i = 0, j = 0;
    try {
      i = std::stoll(compact.substr(2, star - 2));
      std::string right = compact.substr(star + 1, eq - star - 1);
      if (right.rfind("e.", 0) != 0) throw ParseError(line_no, "malformed product line");
      j = std::stoll(right.substr(2));
    } catch (ParseError&) {
      throw;
    } catch (...) {
      throw ParseError(line_no, "bad product indices");
    }
    if (i < 1 || j < 1 || i > A.dim || j > A.dim)
      throw ParseError(line_no, "product index out of range");
    Vec<S> v = zero_vector(A.dim, F);
    for (auto& [coeff, k] : detail::parse_terms(compact.substr(eq + 1), line_no)) {
      if (k < 1 || k > A.dim) throw ParseError(line_no, "basis index out of range");
      v(k - 1) = v(k - 1) + F.parse(coeff);
    }
    A.table[static_cast<std::size_t>((i - 1) * A.dim + (j - 1))] = std::move(v);
  }
  if (!saw_dim) throw ParseError(line_no, "missing dim declaration");
  for (Index i = 0; i < A.dim; ++i) A.generators.push_back(i);
  if (auto bad = associativity_defect(A))
    throw std::invalid_argument(
        "product table is not associative at basis triple (" +
        std::to_string((*bad)[0] + 1) + "," + std::to_string((*bad)[1] + 1) +
        "," + std::to_string((*bad)[2] + 1) + ")");
  return A;
}

template <class S>
std::string format_assoc(const AssocAlgebra<S>& A) {
  std::ostringstream os;
  os << "assoc\n";
  os << "field " << A.F.spec.str() << "\n";
  os << "dim " << A.dim << "\n";
  for (Index i = 0; i < A.dim; ++i)
    for (Index j = 0; j < A.dim; ++j) {
      const Vec<S>& v = A.product(i, j);
      if (is_zero_vec(v)) continue;
      os << "e." << i + 1 << " * e." << j + 1 << " = "
         << format_element_terms(v, A.F) << "\n";
    }
  return os.str();
}

}  // namespace uea
