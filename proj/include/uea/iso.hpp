#pragma once

#include <optional>
#include <string>

#include "uea/lifting.hpp"

namespace uea {

enum class IsoStatus { Isomorphic, NotIsomorphic, Inconclusive, CertificateInvalid };

/// Outcome of an isomorphism question at a fixed truncation level. Isomorphic
/// verdicts carry a replayable certificate; NotIsomorphic carries either the
/// name of a separating invariant or the record of an exhausted search.
template <class S>
struct IsoVerdict {
  IsoStatus status = IsoStatus::Inconclusive;
  std::string evidence;   // "certificate" | "invariant:<name>" | "exhausted-search" | "budget"
  std::string detail;
  int truncation = 0;
  FieldSpec field;
  long long nodes = 0;
  bool promoted = false;  // certificate re-verified at t+1 and t+2
  std::optional<GeneratorMap<S>> certificate;
};

/// Decide whether the truncated envelopes of L and K at level t are
/// isomorphic, by certificate search over a finite field. Requires
/// homogeneous bases on both sides.
template <class S>
IsoVerdict<S> filtered_iso_search(const LieAlgebra<S>& L, const LieAlgebra<S>& K,
                                  int t, LiftOptions opts = {}) {
  static_assert(std::is_same_v<S, Zp>, "search requires a finite field");
  IsoVerdict<S> out;
  out.truncation = t;
  out.field = L.field().spec;
  Envelope<S> target(K, t);
  LiftTarget<S> T = make_lift_target(target);
  LiftOutcome<S> res = lift_search(L, T, /*envelope_mode=*/true, opts);
  out.nodes = res.stats.nodes;
  switch (res.status) {
    case LiftStatus::LayerMismatch:
      out.status = IsoStatus::NotIsomorphic;
      out.evidence = "invariant:graded-layer-dims";
      out.detail = res.note;
      return out;
    case LiftStatus::Budget:
      out.status = IsoStatus::Inconclusive;
      out.evidence = "budget";
      out.detail = "node budget exhausted after " + std::to_string(res.stats.nodes) +
                   " nodes";
      return out;
    case LiftStatus::Exhausted:
      out.status = IsoStatus::NotIsomorphic;
      out.evidence = "exhausted-search";
      out.detail = res.note.empty()
                       ? "no certificate among " + std::to_string(res.stats.nodes) +
                             " candidates"
                       : res.note;
      return out;
    case LiftStatus::Found:
      break;
  }
  GeneratorMap<S> cert;
  for (Index k = 0; k < L.dim(); ++k)
    cert.images.push_back(res.images.row(k).transpose());
  CertVerdict<S> replay = verify_certificate(L, K, t, cert);
  if (replay.status != CertStatus::Isomorphic)
    throw std::logic_error("search produced a certificate that fails replay");
  out.status = IsoStatus::Isomorphic;
  out.evidence = "certificate";
  out.promoted = replay.promoted;
  out.certificate = std::move(cert);
  return out;
}

/// Same search against an arbitrary nilpotent associative algebra (for
/// quotient targets). The truncation is the nilpotency index of A.
template <class S>
IsoVerdict<S> filtered_iso_search_assoc(const LieAlgebra<S>& L,
                                        const AssocAlgebra<S>& A,
                                        LiftOptions opts = {}) {
  static_assert(std::is_same_v<S, Zp>, "search requires a finite field");
  AdaptedAssoc<S> ad = make_lift_target(A);
  IsoVerdict<S> out;
  out.truncation = ad.target.max_weight + 1;
  out.field = L.field().spec;
  LiftOutcome<S> res = lift_search(L, ad.target, /*envelope_mode=*/true, opts);
  out.nodes = res.stats.nodes;
  if (res.status == LiftStatus::LayerMismatch) {
    out.status = IsoStatus::NotIsomorphic;
    out.evidence = "invariant:graded-layer-dims";
    out.detail = res.note;
    return out;
  }
  if (res.status == LiftStatus::Budget) {
    out.status = IsoStatus::Inconclusive;
    out.evidence = "budget";
    return out;
  }
  if (res.status == LiftStatus::Exhausted) {
    out.status = IsoStatus::NotIsomorphic;
    out.evidence = "exhausted-search";
    out.detail = res.note;
    return out;
  }
  // replay in the original coordinates of A
  Mat<S> images_orig = res.images * ad.target.to_original;
  for (Index i = 0; i < L.dim(); ++i)
    for (Index j = i + 1; j < L.dim(); ++j) {
      Vec<S> lhs = A.commutator(images_orig.row(i).transpose(),
                                images_orig.row(j).transpose());
      Vec<S> rhs = L.bracket_basis(i, j);
      for (Index k = 0; k < L.dim(); ++k) {
        if (rhs(k).is_zero()) continue;
        for (Index b = 0; b < A.dim; ++b)
          lhs(b) = lhs(b) - rhs(k) * images_orig(k, b);
      }
      if (!is_zero_vec(lhs))
        throw std::logic_error("assoc-target certificate fails replay");
    }
  Envelope<S> src(L, out.truncation);
  Mat<S> induced = zero_matrix(A.dim, src.dim(), A.F);
  for (Index b = 0; b < src.dim(); ++b) {
    const Mono& mono = src.mono(b);
    Vec<S> acc = images_orig.row(mono.back()).transpose();
    for (std::size_t k = mono.size() - 1; k-- > 0;)
      acc = A.mult(images_orig.row(mono[k]).transpose(), acc);
    induced.col(b) = acc;
  }
  if (rank(induced) != A.dim)
    throw std::logic_error("assoc-target certificate is not bijective");
  GeneratorMap<S> cert;
  for (Index k = 0; k < L.dim(); ++k)
    cert.images.push_back(images_orig.row(k).transpose());
  out.status = IsoStatus::Isomorphic;
  out.evidence = "certificate";
  out.certificate = std::move(cert);
  return out;
}

/// Lie algebra isomorphism over a finite field by the same lifting scheme,
/// with the target algebra itself as the filtered structure.
template <class S>
std::optional<Mat<S>> lie_iso_search(const LieAlgebra<S>& L0, const LieAlgebra<S>& K0,
                                     LiftOptions opts = {}) {
  static_assert(std::is_same_v<S, Zp>, "search requires a finite field");
  auto hl = homogeneous_basis(L0);
  auto hk = homogeneous_basis(K0);
  LiftTarget<S> T = make_lift_target_lie(hk.algebra);
  LiftOutcome<S> res = lift_search(hl.algebra, T, /*envelope_mode=*/false, opts);
  if (res.status != LiftStatus::Found) return std::nullopt;
  // res.images rows live on the homogeneous bases; transport to the originals
  auto pl_inv = inverse_matrix(hl.new_from_old, L0.field());
  if (!pl_inv) throw std::logic_error("homogeneous basis change not invertible");
  Mat<S> map_old = Mat<S>(*pl_inv * res.images) * hk.new_from_old;
  // verify: change_basis of K0 along map_old rows must equal L0
  LieAlgebra<S> probe = change_basis(K0, map_old);
  if (!same_structure_constants(probe, L0))
    throw std::logic_error("Lie-level certificate fails replay");
  return map_old;
}

/// Graded isomorphism search: backtracking over invertible degree-1 maps with
/// bracket-consistency pruning; a found degree-1 map extends uniquely to all
/// degrees. Exhaustion is a proof of graded non-isomorphism over the field.
template <class S>
std::optional<Mat<S>> graded_iso_search(const GradedLieAlgebra<S>& G1,
                                        const GradedLieAlgebra<S>& G2,
                                        LiftOptions opts = {}) {
  static_assert(std::is_same_v<S, Zp>, "search requires a finite field");
  if (G1.component_dims != G2.component_dims) return std::nullopt;
  opts.graded_only = true;
  LiftTarget<S> T = make_lift_target_lie(G2.algebra);
  LiftOutcome<S> res = lift_search(G1.algebra, T, /*envelope_mode=*/false, opts);
  if (res.status != LiftStatus::Found) return std::nullopt;
  LieAlgebra<S> probe = change_basis(G2.algebra, res.images);
  if (!same_structure_constants(probe, G1.algebra))
    throw std::logic_error("graded certificate fails replay");
  return res.images;
}

}  // namespace uea
