#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "uea/lie_io.hpp"
#include "uea/pbw.hpp"

namespace uea {

/// Images of a Lie algebra's basis inside a target truncated envelope; the
/// carrier of certificates and search results. Well-formed iff the images
/// satisfy every bracket relation of the source.
template <class S>
struct GeneratorMap {
  std::vector<Vec<S>> images;  // one per source basis element, target coords

  static GeneratorMap identity(const LieAlgebra<S>& L, const Envelope<S>& target) {
    GeneratorMap m;
    for (Index i = 0; i < L.dim(); ++i)
      m.images.push_back(target.lie_element(unit_vector(L.dim(), i, L.field())));
    return m;
  }
};

template <class S>
struct HomViolation {
  Index i, j;       // source bracket pair (0-based)
  Vec<S> residual;  // [f(x_i), f(x_j)] - f([x_i, x_j]) in target coords
};

/// Check every defining relation of the source against the images; returns
/// the first violation in (i, j) order, or nullopt when the map is a Lie
/// homomorphism into the target.
template <class S>
std::optional<HomViolation<S>> check_lie_hom(const LieAlgebra<S>& L,
                                             const Envelope<S>& target,
                                             const GeneratorMap<S>& m) {
  for (Index i = 0; i < L.dim(); ++i)
    for (Index j = i + 1; j < L.dim(); ++j) {
      Vec<S> lhs = target.commutator(m.images[static_cast<std::size_t>(i)],
                                     m.images[static_cast<std::size_t>(j)]);
      Vec<S> rhs = L.bracket_basis(i, j);
      for (Index k = 0; k < L.dim(); ++k) {
        if (rhs(k).is_zero()) continue;
        const Vec<S>& img = m.images[static_cast<std::size_t>(k)];
        for (Index b = 0; b < target.dim(); ++b)
          lhs(b) = lhs(b) - rhs(k) * img(b);
      }
      if (!is_zero_vec(lhs)) return HomViolation<S>{i, j, std::move(lhs)};
    }
  return std::nullopt;
}

/// Matrix of the induced algebra map on the monomial basis of the source
/// envelope: each source monomial goes to the product of its letters' images.
/// Columns are indexed by source basis monomials.
template <class S>
Mat<S> induced_matrix(const Envelope<S>& source, const Envelope<S>& target,
                      const GeneratorMap<S>& m) {
  Mat<S> out = zero_matrix(target.dim(), source.dim(), target.field());
  for (Index b = 0; b < source.dim(); ++b) {
    const Mono& mono = source.mono(b);
    Vec<S> acc = m.images[static_cast<std::size_t>(mono.back())];
    for (std::size_t k = mono.size() - 1; k-- > 0;)
      acc = target.mult(m.images[static_cast<std::size_t>(mono[k])], acc);
    out.col(b) = acc;
  }
  return out;
}

enum class CertStatus { Isomorphic, RelationViolation, NotBijective };

template <class S>
struct CertVerdict {
  CertStatus status;
  int truncation;
  std::optional<HomViolation<S>> violation;
  Index rank = 0;
  Index dim = 0;
  bool promoted = false;  // also verified at t+1 and t+2
};

/// Verify a certificate map between two truncated envelopes: accept iff the
/// images define a Lie homomorphism and the induced map is bijective at the
/// given level. Surjectivity plus equal layer dimensions forces injectivity,
/// but the rank is computed outright. A failed certificate is never evidence
/// of non-isomorphism.
template <class S>
CertVerdict<S> verify_certificate(const LieAlgebra<S>& L, const LieAlgebra<S>& K,
                                  int t, const GeneratorMap<S>& m,
                                  bool try_promote = true) {
  Envelope<S> src(L, t), dst(K, t);
  CertVerdict<S> out;
  out.truncation = t;
  out.dim = dst.dim();
  if (auto bad = check_lie_hom(L, dst, m)) {
    out.status = CertStatus::RelationViolation;
    out.violation = std::move(bad);
    return out;
  }
  Mat<S> phi = induced_matrix(src, dst, m);
  out.rank = rank(phi);
  if (src.dim() != dst.dim() || out.rank != dst.dim()) {
    out.status = CertStatus::NotBijective;
    return out;
  }
  out.status = CertStatus::Isomorphic;
  if (try_promote) {
    out.promoted = true;
    for (int tt : {t + 1, t + 2}) {
      Envelope<S> dst2(K, tt);
      GeneratorMap<S> m2 = lift_map(dst, dst2, m);
      if (check_lie_hom(L, dst2, m2)) {
        out.promoted = false;
        break;
      }
      Envelope<S> src2(L, tt);
      if (rank(induced_matrix(src2, dst2, m2)) != dst2.dim()) {
        out.promoted = false;
        break;
      }
    }
  }
  return out;
}

/// Re-express a map's images in a deeper truncation of the same target; the
/// monomial basis is nested, so coordinates transfer by monomial lookup.
template <class S>
GeneratorMap<S> lift_map(const Envelope<S>& from, const Envelope<S>& to,
                         const GeneratorMap<S>& m) {
  GeneratorMap<S> out;
  for (const Vec<S>& img : m.images) {
    Vec<S> v = zero_vector(to.dim(), to.field());
    for (Index b = 0; b < from.dim(); ++b) {
      if (img(b).is_zero()) continue;
      Index nb = to.index_of(from.mono(b));
      if (nb < 0)
        throw std::invalid_argument("map image does not embed into the deeper truncation");
      v(nb) = img(b);
    }
    out.images.push_back(std::move(v));
  }
  return out;
}

/// Map file format: one line per source basis element,
///   e.i -> c1*e.a^p*e.b + c2*e.c + ...
/// with `#` comments. Unlisted basis elements default to the identity image.
/// Factors need not be sorted; words are straightened on input.
template <class S>
GeneratorMap<S> parse_map_file(const std::string& text, const LieAlgebra<S>& L,
                               const Envelope<S>& target) {
  GeneratorMap<S> m = GeneratorMap<S>::identity(L, target);
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = detail::drop_comment(line);
    if (s.empty()) continue;
    auto arrow = s.find("->");
    if (arrow == std::string::npos) throw ParseError(line_no, "expected 'e.i -> ...'");
    std::string lhs = detail::remove_spaces(s.substr(0, arrow));
    if (lhs.rfind("e.", 0) != 0) throw ParseError(line_no, "left side must be e.i");
    Index gen = 0;
    try {
      gen = std::stoll(lhs.substr(2));
    } catch (...) {
      throw ParseError(line_no, "bad generator index");
    }
    if (gen < 1 || gen > L.dim())
      throw ParseError(line_no, "generator index out of range");
    std::string rhs = detail::remove_spaces(s.substr(arrow + 2));
    Vec<S> img = zero_vector(target.dim(), target.field());
    if (rhs != "0") {
      std::size_t i = 0;
      bool first = true;
      while (i < rhs.size()) {
        std::string sign;
        if (rhs[i] == '+' || rhs[i] == '-') {
          if (rhs[i] == '-') sign = "-";
          ++i;
        } else if (!first) {
          throw ParseError(line_no, "expected + or - between terms");
        }
        std::size_t end = rhs.size();
        for (std::size_t j = i; j < rhs.size(); ++j)
          if (rhs[j] == '+' || (rhs[j] == '-' && j > i && rhs[j - 1] != '/')) {
            end = j;
            break;
          }
        std::string term = rhs.substr(i, end - i);
        i = end;
        first = false;
        // split on '*': leading coefficient (optional), then e.a^p factors
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (start <= term.size()) {
          auto star = term.find('*', start);
          if (star == std::string::npos) {
            parts.push_back(term.substr(start));
            break;
          }
          parts.push_back(term.substr(start, star - start));
          start = star + 1;
        }
        S coeff = target.field().one();
        if (!sign.empty()) coeff = -coeff;
        std::size_t fi = 0;
        if (!parts.empty() && parts[0].rfind("e.", 0) != 0) {
          try {
            coeff = coeff * target.field().parse(parts[0]);
          } catch (...) {
            throw ParseError(line_no, "bad coefficient '" + parts[0] + "'");
          }
          fi = 1;
        }
        std::vector<Index> word;
        for (; fi < parts.size(); ++fi) {
          const std::string& f = parts[fi];
          if (f.rfind("e.", 0) != 0)
            throw ParseError(line_no, "expected e.<index> factor in '" + term + "'");
          std::string body = f.substr(2);
          long long power = 1;
          auto caret = body.find('^');
          if (caret != std::string::npos) {
            try {
              power = std::stoll(body.substr(caret + 1));
            } catch (...) {
              throw ParseError(line_no, "bad exponent");
            }
            body = body.substr(0, caret);
          }
          Index g = 0;
          try {
            g = std::stoll(body);
          } catch (...) {
            throw ParseError(line_no, "bad factor index");
          }
          if (g < 1 || g > target.source().dim() || power < 1)
            throw ParseError(line_no, "factor index or exponent out of range");
          for (long long r = 0; r < power; ++r) word.push_back(g - 1);
        }
        if (word.empty()) throw ParseError(line_no, "term without a monomial");
        Vec<S> w = target.straighten(word);
        for (Index b = 0; b < target.dim(); ++b) img(b) = img(b) + coeff * w(b);
      }
    }
    m.images[static_cast<std::size_t>(gen - 1)] = std::move(img);
  }
  return m;
}

template <class S>
std::string format_map(const GeneratorMap<S>& m, const Envelope<S>& target) {
  std::ostringstream os;
  for (std::size_t i = 0; i < m.images.size(); ++i)
    os << "e." << i + 1 << " -> "
       << target.format_element(m.images[i], /*file_style=*/true) << "\n";
  return os.str();
}

}  // namespace uea
