#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "uea/lie_algebra.hpp"

namespace uea {

namespace detail {

inline std::string strip(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string drop_comment(std::string_view line) {
  auto pos = line.find('#');
  if (pos != std::string_view::npos) line = line.substr(0, pos);
  return strip(line);
}

inline std::string remove_spaces(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

/// Split "c1*e.k1+c2*e.k2-..." into (coefficient string, index) pairs.
/// A bare "e.k" carries coefficient 1.
inline std::vector<std::pair<std::string, Index>> parse_terms(
    const std::string& rhs_in, int line_no) {
  std::string rhs = remove_spaces(rhs_in);
  std::vector<std::pair<std::string, Index>> out;
  if (rhs == "0") return out;
  std::size_t i = 0;
  while (i < rhs.size()) {
    std::string sign;
    if (rhs[i] == '+' || rhs[i] == '-') {
      if (rhs[i] == '-') sign = "-";
      ++i;
    } else if (!out.empty()) {
      throw ParseError(line_no, "expected + or - between terms");
    }
    std::size_t term_end = rhs.size();
    int depth = 0;
    for (std::size_t j = i; j < rhs.size(); ++j) {
      if (rhs[j] == '(') ++depth;
      if (rhs[j] == ')') --depth;
      if (depth == 0 && (rhs[j] == '+' || (rhs[j] == '-' && j > i))) {
        // '-' inside a fraction like 1/-2 is not expected; treat as separator
        term_end = j;
        break;
      }
    }
    std::string term = rhs.substr(i, term_end - i);
    i = term_end;
    std::string coeff = "1";
    std::string evar = term;
    auto star = term.find('*');
    if (star != std::string::npos) {
      coeff = term.substr(0, star);
      evar = term.substr(star + 1);
    }
    if (evar.size() < 3 || evar.substr(0, 2) != "e.")
      throw ParseError(line_no, "expected e.<index> in term '" + term + "'");
    Index k = 0;
    try {
      k = std::stoll(evar.substr(2));
    } catch (...) {
      throw ParseError(line_no, "bad basis index in '" + evar + "'");
    }
    out.emplace_back(sign + coeff, k);
  }
  return out;
}

}  // namespace detail

/// First pass over a Lie algebra file: just the declared field, so the caller
/// can pick the scalar type before parsing in full.
inline FieldSpec peek_field(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = detail::drop_comment(line);
    if (s.empty() || s == "assoc") continue;
    if (s.rfind("field", 0) != 0)
      throw ParseError(line_no, "expected 'field ...' as the first declaration");
    auto fs = FieldSpec::parse(detail::strip(s.substr(5)));
    if (!fs) throw ParseError(line_no, "unknown field '" + s.substr(5) + "'");
    return *fs;
  }
  throw ParseError(line_no, "missing field declaration");
}

/// Line-oriented Lie algebra format:
///   field Q | GF(p)
///   dim d
///   weights w1 ... wd          (optional)
///   [i,j] = c1*e.k1 + c2*e.k2  (1 <= i < j <= d; omitted brackets are zero)
template <class S>
LieAlgebra<S> parse_lie(const std::string& text, const Field<S>& F) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_field = false, saw_dim = false;
  Index dim = 0;
  LieAlgebra<S> L;
  std::vector<int> weights;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = detail::drop_comment(line);
    if (s.empty()) continue;
    if (s.rfind("field", 0) == 0) {
      if (saw_field) throw ParseError(line_no, "duplicate field declaration");
      auto fs = FieldSpec::parse(detail::strip(s.substr(5)));
      if (!fs) throw ParseError(line_no, "unknown field");
      if (*fs != F.spec)
        throw ParseError(line_no, "field mismatch: file declares " + fs->str());
      saw_field = true;
      continue;
    }
    if (!saw_field) throw ParseError(line_no, "field must be declared first");
    if (s.rfind("dim", 0) == 0) {
      if (saw_dim) throw ParseError(line_no, "duplicate dim declaration");
      try {
        dim = std::stoll(detail::strip(s.substr(3)));
      } catch (...) {
        throw ParseError(line_no, "bad dimension");
      }
      if (dim <= 0) throw ParseError(line_no, "dimension must be positive");
      L = LieAlgebra<S>(F, dim);
      saw_dim = true;
      continue;
    }
    if (!saw_dim) throw ParseError(line_no, "dim must precede this line");
    if (s.rfind("weights", 0) == 0) {
      std::istringstream ws(s.substr(7));
      int w;
      while (ws >> w) weights.push_back(w);
      if (static_cast<Index>(weights.size()) != dim)
        throw ParseError(line_no, "weights count differs from dim");
      for (int x : weights)
        if (x <= 0) throw ParseError(line_no, "weights must be positive");
      continue;
    }
    if (s[0] == '[') {
      std::string compact = detail::remove_spaces(s);
      auto close = compact.find(']');
      auto eq = compact.find('=');
      auto comma = compact.find(',');
      if (close == std::string::npos || eq == std::string::npos ||
          comma == std::string::npos || comma > close || eq < close)
        throw ParseError(line_no, "malformed bracket line");
      Index bi = 0, bj = 0;
      try {
        bi = std::stoll(compact.substr(1, comma - 1));
        bj = std::stoll(compact.substr(comma + 1, close - comma - 1));
      } catch (...) {
        throw ParseError(line_no, "bad bracket indices");
      }
      if (bi < 1 || bj < 1 || bi > dim || bj > dim)
        throw ParseError(line_no, "bracket index out of range");
      if (bi >= bj)
        throw ParseError(line_no, "brackets require i < j");
      Vec<S> v = zero_vector(dim, F);
      for (auto& [coeff, k] : detail::parse_terms(compact.substr(eq + 1), line_no)) {
        if (k < 1 || k > dim)
          throw ParseError(line_no, "basis index out of range in bracket value");
        try {
          v(k - 1) = v(k - 1) + F.parse(coeff);
        } catch (...) {
          throw ParseError(line_no, "bad coefficient '" + coeff + "'");
        }
      }
      L.set_bracket(bi - 1, bj - 1, std::move(v));
      continue;
    }
    throw ParseError(line_no, "unrecognized line '" + s + "'");
  }
  if (!saw_dim) throw ParseError(line_no, "missing dim declaration");
  if (!weights.empty()) L.set_weights(weights);
  return L;
}

template <class S>
std::string format_element_terms(const Vec<S>& v, const Field<S>& F) {
  std::string out;
  for (Index k = 0; k < v.size(); ++k) {
    if (v(k).is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += F.str(v(k)) + "*e." + std::to_string(k + 1);
  }
  return out.empty() ? "0" : out;
}

template <class S>
std::string format_lie(const LieAlgebra<S>& L) {
  std::ostringstream os;
  os << "field " << L.field().spec.str() << "\n";
  os << "dim " << L.dim() << "\n";
  if (L.has_weights()) {
    os << "weights";
    for (int w : L.weights()) os << " " << w;
    os << "\n";
  }
  for (Index i = 0; i < L.dim(); ++i)
    for (Index j = i + 1; j < L.dim(); ++j) {
      Vec<S> v = L.bracket_basis(i, j);
      if (is_zero_vec(v)) continue;
      os << "[" << i + 1 << "," << j + 1 << "] = "
         << format_element_terms(v, L.field()) << "\n";
    }
  return os.str();
}

}  // namespace uea
