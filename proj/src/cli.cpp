#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "uea/catalog.hpp"
#include "uea/iso.hpp"
#include "uea/lie_io.hpp"
#include "uea/screen.hpp"

namespace uea {
namespace {

using Clock = std::chrono::steady_clock;

struct Report {
  bool machine = false;
  bool comments = false;  // file-emitting commands keep reports as # comments
  std::ostringstream out;

  void kv(const std::string& key, const std::string& value) {
    if (comments) out << "# ";
    out << key << (machine ? "=" : ": ") << value << "\n";
  }
  void kv(const std::string& key, long long value) {
    kv(key, std::to_string(value));
  }
  void raw(const std::string& s) { out << s; }
  void line(const std::string& s) { out << s << "\n"; }
};

struct CommonOpts {
  std::string input;        // positional path or empty
  std::string catalog;      // --catalog NAME
  std::string field = "Q";  // --field
  std::string param;        // --param
  bool machine = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Input designators: a file path, or catalog:NAME, or catalog:NAME:param.
struct InputSpec {
  bool is_catalog = false;
  std::string path;
  std::string name;
  std::string param;
};

InputSpec parse_input_spec(const std::string& s) {
  InputSpec spec;
  if (s.rfind("catalog:", 0) == 0) {
    spec.is_catalog = true;
    std::string rest = s.substr(8);
    auto colon = rest.find(':');
    if (colon == std::string::npos) {
      spec.name = rest;
    } else {
      spec.name = rest.substr(0, colon);
      spec.param = rest.substr(colon + 1);
    }
  } else {
    spec.path = s;
  }
  return spec;
}

/// The declared field of whatever the designator points at.
FieldSpec input_field(const InputSpec& in, const std::string& flag_field) {
  if (!in.is_catalog) return peek_field(read_file(in.path));
  auto fs = FieldSpec::parse(flag_field);
  if (!fs) throw std::runtime_error("unknown field '" + flag_field + "'");
  return *fs;
}

template <class S>
LieAlgebra<S> load_lie(const InputSpec& in, const Field<S>& F) {
  if (in.is_catalog) {
    std::optional<S> param;
    if (!in.param.empty()) param = F.parse(in.param);
    return catalog_build<S>(in.name, F, param);
  }
  return parse_lie<S>(read_file(in.path), F);
}

InputSpec common_input(const CommonOpts& o) {
  if (!o.catalog.empty()) {
    InputSpec spec;
    spec.is_catalog = true;
    spec.name = o.catalog;
    spec.param = o.param;
    return spec;
  }
  if (o.input.empty()) throw std::runtime_error("no input given");
  InputSpec spec = parse_input_spec(o.input);
  if (spec.is_catalog && spec.param.empty()) spec.param = o.param;
  return spec;
}

std::string describe(const InputSpec& in) {
  if (in.is_catalog)
    return "catalog " + in.name + (in.param.empty() ? "" : "(" + in.param + ")");
  return "file " + in.path;
}

/// Truncation option: a literal level, or "class+1" resolved per input, or
/// empty meaning the class+1 default where one is allowed.
int resolve_truncate(const std::string& spec, int clazz, bool allow_default) {
  if (spec.empty()) {
    if (!allow_default) throw std::runtime_error("--truncate is required");
    return clazz + 1;
  }
  if (spec == "class+1") return clazz + 1;
  int t = 0;
  try {
    t = std::stoi(spec);
  } catch (...) {
    throw std::runtime_error("bad --truncate value '" + spec + "'");
  }
  if (t < 2) throw std::runtime_error("truncation level must be >= 2");
  return t;
}

int finish(Report& rep, Clock::time_point t0, int code) {
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0);
  std::cout << rep.out.str();
  std::cout << "# wall-time-ms: " << ms.count() << "\n";
  return code;
}

std::string status_str(IsoStatus s) {
  switch (s) {
    case IsoStatus::Isomorphic: return "Isomorphic";
    case IsoStatus::NotIsomorphic: return "NotIsomorphic";
    case IsoStatus::Inconclusive: return "Inconclusive";
    case IsoStatus::CertificateInvalid: return "CertificateInvalid";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// single-input commands
// ---------------------------------------------------------------------------

template <class S>
int cmd_validate(const CommonOpts& o, const Field<S>& F, Report& rep,
                 Clock::time_point t0) {
  InputSpec in = common_input(o);
  auto L = load_lie<S>(in, F);
  rep.kv("input", describe(in));
  rep.kv("dim", L.dim());
  auto bad = validate(L);
  if (bad.empty()) {
    rep.kv("status", "ok");
    return finish(rep, t0, 0);
  }
  rep.kv("status", "violations");
  for (const auto& v : bad) {
    std::ostringstream os;
    os << v.kind << " at (" << v.i + 1 << "," << v.j + 1;
    if (v.k >= 0) os << "," << v.k + 1;
    os << "): " << v.detail;
    rep.kv("violation", os.str());
  }
  return finish(rep, t0, 1);
}

template <class S>
int cmd_lcs(const CommonOpts& o, const Field<S>& F, Report& rep, Clock::time_point t0) {
  InputSpec in = common_input(o);
  auto L = load_lie<S>(in, F);
  rep.kv("input", describe(in));
  auto lcs = lower_central_series(L);
  std::ostringstream os;
  os << "(";
  auto dims = lcs.dims();
  for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? ", " : "") << dims[i];
  os << ")";
  rep.kv("series", os.str());
  rep.kv("class", lcs.clazz);
  return finish(rep, t0, 0);
}

template <class S>
int cmd_gr(const CommonOpts& o, const Field<S>& F, Report& rep, Clock::time_point t0) {
  InputSpec in = common_input(o);
  auto L = load_lie<S>(in, F);
  rep.kv("input", describe(in));
  auto gr = graded_algebra(L);
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < gr.component_dims.size(); ++i)
    os << (i ? ", " : "") << gr.component_dims[i];
  os << ")";
  rep.kv("component-dims", os.str());
  rep.kv("key", graded_key(gr).str());
  rep.raw(format_lie(gr.algebra));
  return finish(rep, t0, 0);
}

template <class S>
int cmd_env(const CommonOpts& o, const std::string& trunc_s, bool table,
            const Field<S>& F, Report& rep, Clock::time_point t0) {
  InputSpec in = common_input(o);
  auto L0 = load_lie<S>(in, F);
  auto hb = homogeneous_basis(L0);
  int t = resolve_truncate(trunc_s, hb.algebra.weights().back(), false);
  rep.kv("input", describe(in));
  rep.kv("truncation", t);
  if (!hb.identity) rep.kv("note", "re-based to a homogeneous basis");
  Envelope<S> E(hb.algebra, t);
  rep.kv("dim", E.dim());
  std::ostringstream layers;
  for (int w = 1; w < t; ++w) layers << (w > 1 ? " " : "") << E.layer_dim(w);
  rep.kv("layer-dims", layers.str());
  for (Index b = 0; b < E.dim(); ++b) {
    std::ostringstream os;
    os << "b" << b + 1 << " = " << E.format_mono(b) << "  (weight "
       << E.weight_of(b) << ", degree " << E.degree_of(b) << ")";
    rep.line(os.str());
  }
  if (table) {
    for (Index i = 0; i < E.dim(); ++i)
      for (Index j = 0; j < E.dim(); ++j) {
        const Vec<S>& p = E.product(i, j);
        if (is_zero_vec(p)) continue;
        rep.line(E.format_mono(i) + " * " + E.format_mono(j) + " = " +
                 E.format_element(p));
      }
  }
  return finish(rep, t0, 0);
}

/// center and fingerprint accept both Lie inputs (with --truncate) and
/// associative algebra files.
template <class S>
AssocAlgebra<S> load_assoc_or_envelope(const InputSpec& in, const Field<S>& F,
                                       const std::string& trunc_s, Report& rep) {
  if (!in.is_catalog) {
    std::string text = read_file(in.path);
    std::istringstream probe(text);
    std::string first;
    while (std::getline(probe, first)) {
      auto s = detail::drop_comment(first);
      if (!s.empty()) {
        if (s == "assoc") {
          auto A = parse_assoc<S>(text, F);
          if (A.dim > 80)
            rep.kv("note", "associativity check skipped above dimension 80");
          return A;
        }
        break;
      }
    }
  }
  auto L = load_lie<S>(in, F);
  auto hb = homogeneous_basis(L);
  if (!hb.identity) rep.kv("note", "re-based to a homogeneous basis");
  int t = resolve_truncate(trunc_s, hb.algebra.weights().back(), true);
  rep.kv("truncation", t);
  return envelope_to_assoc(Envelope<S>(hb.algebra, t));
}

template <class S>
int cmd_center(const CommonOpts& o, const std::string& trunc_s, const Field<S>& F,
               Report& rep, Clock::time_point t0) {
  InputSpec in = common_input(o);
  rep.kv("input", describe(in));
  auto A = load_assoc_or_envelope<S>(in, F, trunc_s, rep);
  rep.kv("dim", A.dim);
  rep.kv("dim Z", center(A).dim());
  return finish(rep, t0, 0);
}

template <class S>
int cmd_fingerprint(const CommonOpts& o, const std::string& trunc_s,
                    const Field<S>& F, Report& rep, Clock::time_point t0) {
  InputSpec in = common_input(o);
  rep.kv("input", describe(in));
  auto A = load_assoc_or_envelope<S>(in, F, trunc_s, rep);
  auto fp = fingerprint(A);
  std::ostringstream p, cm, ci;
  for (std::size_t i = 0; i < fp.power_dims.size(); ++i)
    p << (i ? " " : "") << fp.power_dims[i];
  for (std::size_t i = 0; i < fp.center_mod_powers.size(); ++i)
    cm << (i ? " " : "") << fp.center_mod_powers[i];
  for (std::size_t i = 0; i < fp.center_meet_powers.size(); ++i)
    ci << (i ? " " : "") << fp.center_meet_powers[i];
  rep.kv("power-dims", p.str());
  rep.kv("center-dim", fp.center_dim);
  rep.kv("center-mod-powers", cm.str());
  rep.kv("center-meet-powers", ci.str());
  return finish(rep, t0, 0);
}

template <class S>
int cmd_quotient(const CommonOpts& o, const std::string& trunc_s, int ideal_lcs,
                 const Field<S>& F, Report& rep, Clock::time_point t0) {
  InputSpec in = common_input(o);
  auto L0 = load_lie<S>(in, F);
  auto hb = homogeneous_basis(L0);
  int t = resolve_truncate(trunc_s, hb.algebra.weights().back(), false);
  Envelope<S> E(hb.algebra, t);
  auto A = envelope_to_assoc(E);
  auto lcs = lower_central_series(hb.algebra);
  if (ideal_lcs < 1 || ideal_lcs > lcs.clazz + 1)
    throw std::runtime_error("--ideal-lcs index out of range");
  const Subspace<S>& term = ideal_lcs <= lcs.clazz
                                ? lcs.terms[static_cast<std::size_t>(ideal_lcs - 1)]
                                : Subspace<S>::zero(hb.algebra.dim());
  Mat<S> gens(term.dim(), A.dim);
  for (Index b = 0; b < term.dim(); ++b)
    gens.row(b) = E.lie_element(term.basis().row(b).transpose()).transpose();
  Subspace<S> ideal = ideal_generated_by(A, gens);
  auto q = quotient_algebra(A, ideal);
  rep.line("# quotient of the truncation-" + std::to_string(t) + " envelope of " +
           describe(in));
  rep.line("# by the ideal generated by the series term " +
           std::to_string(ideal_lcs) + " (ideal dim " + std::to_string(ideal.dim()) +
           ")");
  rep.raw(format_assoc(q.algebra));
  return finish(rep, t0, 0);
}

// ---------------------------------------------------------------------------
// iso
// ---------------------------------------------------------------------------

void reference_flag(Report& rep, const InputSpec& a, const InputSpec& b,
                    const FieldSpec& fs, int dim, IsoStatus status) {
  if (!a.is_catalog || !b.is_catalog) return;
  std::int64_t chr = fs.finite() ? fs.p : 0;
  bool listed = false;
  for (auto& [ea, eb] : expected_exceptional_pairs(chr, dim))
    if ((a.name == ea && b.name == eb) || (a.name == eb && b.name == ea))
      listed = true;
  if (listed) {
    rep.kv("reference-note",
           "pair listed as coincident in this characteristic in the bundled notes");
    if (status == IsoStatus::Isomorphic)
      rep.kv("reference-check", "verdict AGREES with the bundled notes");
    else if (status == IsoStatus::NotIsomorphic)
      rep.kv("reference-check", "verdict DISAGREES with the bundled notes");
    else
      rep.kv("reference-check", "verdict is inconclusive; nothing to compare");
  } else if (status == IsoStatus::Isomorphic && a.name != b.name) {
    rep.kv("reference-check",
           "verdict DISAGREES with the bundled notes (coincidence not listed)");
  }
}

template <class S>
int cmd_iso(const std::string& in_a, const std::string& in_b,
            const std::string& trunc_s, bool search, const std::string& cert_path,
            long long budget, int jobs, const Field<S>& F, Report& rep,
            Clock::time_point t0) {
  InputSpec a = parse_input_spec(in_a), b = parse_input_spec(in_b);
  auto La = load_lie<S>(a, F);
  auto Lb = load_lie<S>(b, F);
  rep.kv("input-a", describe(a));
  rep.kv("input-b", describe(b));
  auto ha = homogeneous_basis(La);
  auto hb = homogeneous_basis(Lb);
  int t = resolve_truncate(
      trunc_s, std::max(ha.algebra.weights().back(), hb.algebra.weights().back()),
      false);
  rep.kv("truncation", t);

  IsoStatus status = IsoStatus::Inconclusive;
  if (!cert_path.empty()) {
    Envelope<S> target(hb.algebra, t);
    auto m = parse_map_file<S>(read_file(cert_path), ha.algebra, target);
    auto v = verify_certificate(ha.algebra, hb.algebra, t, m);
    switch (v.status) {
      case CertStatus::Isomorphic:
        status = IsoStatus::Isomorphic;
        rep.kv("verdict", "Isomorphic");
        rep.kv("evidence", "certificate");
        rep.kv("promoted", v.promoted ? "yes (also verified at t+1 and t+2)"
                                      : "no (valid at this level only)");
        break;
      case CertStatus::RelationViolation: {
        status = IsoStatus::CertificateInvalid;
        rep.kv("verdict", "CertificateInvalid");
        rep.kv("evidence", "relation-violation");
        std::ostringstream os;
        os << "bracket (" << v.violation->i + 1 << "," << v.violation->j + 1
           << ") residual " << target.format_element(v.violation->residual);
        rep.kv("detail", os.str());
        rep.kv("note", "a failed certificate never proves non-isomorphism");
        break;
      }
      case CertStatus::NotBijective:
        status = IsoStatus::CertificateInvalid;
        rep.kv("verdict", "CertificateInvalid");
        rep.kv("evidence", "not-bijective");
        rep.kv("detail", "induced rank " + std::to_string(v.rank) + " of " +
                             std::to_string(v.dim));
        rep.kv("note", "a failed certificate never proves non-isomorphism");
        break;
    }
    reference_flag(rep, a, b, F.spec, static_cast<int>(La.dim()), status);
    return finish(rep, t0, 0);
  }

  // invariant screening first: graded keys, then fingerprints
  auto ga = graded_algebra(ha.algebra);
  auto gb = graded_algebra(hb.algebra);
  auto ka = graded_key(ga), kb = graded_key(gb);
  if (!(ka == kb)) {
    rep.kv("verdict", "NotIsomorphic");
    rep.kv("evidence", "invariant:graded-key");
    rep.kv("detail", ka.str() + " vs " + kb.str());
    reference_flag(rep, a, b, F.spec, static_cast<int>(La.dim()),
                   IsoStatus::NotIsomorphic);
    return finish(rep, t0, 0);
  }
  auto fa = fingerprint(envelope_to_assoc(Envelope<S>(ha.algebra, t)));
  auto fb = fingerprint(envelope_to_assoc(Envelope<S>(hb.algebra, t)));
  if (!(fa == fb)) {
    rep.kv("verdict", "NotIsomorphic");
    rep.kv("evidence", "invariant:fingerprint");
    rep.kv("detail", Fingerprint::first_difference(fa, fb));
    reference_flag(rep, a, b, F.spec, static_cast<int>(La.dim()),
                   IsoStatus::NotIsomorphic);
    return finish(rep, t0, 0);
  }
  if (!search) {
    rep.kv("verdict", "Inconclusive");
    rep.kv("evidence", "invariant:fingerprint");
    rep.kv("detail", "all computed invariants agree; use --search or --certificate");
    return finish(rep, t0, 2);
  }
  if constexpr (!std::is_same_v<S, Zp>) {
    throw std::runtime_error(
        "--search needs a finite field; certificates remain available over Q");
  } else {
    LiftOptions opts;
    opts.node_budget = budget;
    opts.jobs = jobs;
    auto v = filtered_iso_search(ha.algebra, hb.algebra, t, opts);
    rep.kv("verdict", status_str(v.status));
    rep.kv("evidence", v.evidence);
    if (!v.detail.empty()) rep.kv("detail", v.detail);
    rep.kv("nodes", v.nodes);
    if (v.status == IsoStatus::Isomorphic) {
      rep.kv("promoted", v.promoted ? "yes (also verified at t+1 and t+2)"
                                    : "no (valid at this level only)");
      Envelope<S> target(hb.algebra, t);
      rep.line("certificate:");
      rep.raw(format_map(*v.certificate, target));
    }
    reference_flag(rep, a, b, F.spec, static_cast<int>(La.dim()), v.status);
    return finish(rep, t0, v.status == IsoStatus::Inconclusive ? 2 : 0);
  }
}

// ---------------------------------------------------------------------------
// screen and table
// ---------------------------------------------------------------------------

template <class S>
int cmd_screen(int dim, int t, bool search, const std::string& param,
               long long budget, int jobs, const Field<S>& F, Report& rep,
               Clock::time_point t0) {
  std::optional<S> p;
  if (!param.empty()) p = F.parse(param);
  auto entries = catalog_screen_entries<S>(dim, F, p);
  LiftOptions opts;
  opts.node_budget = budget;
  opts.jobs = jobs;
  auto repd = screen_entries<S>(entries, t, search, F, opts);
  rep.kv("dim", dim);
  rep.kv("truncation", t);
  int bi = 0;
  for (const auto& bucket : repd.buckets) {
    std::ostringstream os;
    for (std::size_t i = 0; i < bucket.members.size(); ++i)
      os << (i ? " " : "") << bucket.members[i];
    rep.kv("bucket." + std::to_string(++bi), os.str() + "  [" + bucket.key + "]");
  }
  int pi = 0;
  bool inconclusive = false;
  for (const auto& pv : repd.pairs) {
    std::ostringstream os;
    os << pv.a << " vs " << pv.b << ": " << status_str(pv.status) << " ("
       << pv.evidence;
    if (!pv.detail.empty()) os << "; " << pv.detail;
    os << ")";
    rep.kv("pair." + std::to_string(++pi), os.str());
    if (pv.status == IsoStatus::Inconclusive && search) inconclusive = true;
  }
  for (const auto& n : repd.notes) rep.kv("note", n);
  return finish(rep, t0, inconclusive ? 2 : 0);
}

template <class S>
int cmd_table(int dim, const std::string& param, long long budget, int jobs,
              const Field<S>& F, Report& rep, Clock::time_point t0) {
  std::optional<S> p;
  if (!param.empty()) p = F.parse(param);
  LiftOptions opts;
  opts.node_budget = budget;
  opts.jobs = jobs;
  auto table = enveloping_iso_table<S>(dim, F, opts, p);
  rep.kv("dim", dim);
  int vi = 0;
  bool inconclusive = false;
  for (const auto& pv : table.verdicts) {
    std::ostringstream os;
    os << pv.a << " vs " << pv.b << " (t=" << pv.truncation
       << "): " << status_str(pv.status) << " (" << pv.evidence;
    if (!pv.detail.empty()) os << "; " << pv.detail;
    os << ")";
    if (pv.status == IsoStatus::Isomorphic && pv.promoted)
      os << " [verified at t+1, t+2]";
    rep.kv("verdict." + std::to_string(++vi), os.str());
    if (pv.status == IsoStatus::Inconclusive) inconclusive = true;
  }
  if (table.exceptional.empty()) {
    rep.kv("coincidences", "none (all decided pairs distinct)");
  } else {
    for (const auto& e : table.exceptional) rep.kv("coincidence", e);
  }
  std::int64_t chr = F.spec.finite() ? F.spec.p : 0;
  if (table.flags.empty()) {
    if (!expected_exceptional_pairs(chr, dim).empty() || !table.exceptional.empty())
      rep.kv("reference-check", "verdicts AGREE with the bundled notes");
    else
      rep.kv("reference-check", "no coincidences expected, none found");
  } else {
    for (const auto& f : table.flags) rep.kv("reference-check", f);
  }
  return finish(rep, t0, inconclusive ? 2 : 0);
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

int cmd_catalog_list(int dim, const std::string& field, Report& rep,
                     Clock::time_point t0) {
  auto fs = FieldSpec::parse(field);
  if (!fs) throw std::runtime_error("unknown field '" + field + "'");
  for (const auto& e : catalog_entries()) {
    if (dim > 0 && e.dim != dim) continue;
    std::ostringstream os;
    os << "dim " << e.dim << "  class " << e.clazz << "  series (";
    for (std::size_t i = 0; i < e.lcs_dims.size(); ++i)
      os << (i ? "," : "") << e.lcs_dims[i];
    os << ")";
    if (!e.has_table) os << "  [sequence metadata only]";
    if (e.parametric) os << "  [parametric]";
    if (e.char2_excluded && fs->finite() && fs->p == 2)
      os << "  [unavailable: characteristic 2]";
    rep.kv(e.name, os.str());
  }
  return finish(rep, t0, 0);
}

template <class S>
int cmd_catalog_show(const std::string& name, const std::string& param,
                     const Field<S>& F, Report& rep, Clock::time_point t0) {
  std::optional<S> p;
  if (!param.empty()) p = F.parse(param);
  auto L = catalog_build<S>(name, F, p);
  rep.line("# catalog " + name + (param.empty() ? "" : "(" + param + ")") +
           " over " + F.spec.str());
  rep.raw(format_lie(L));
  return finish(rep, t0, 0);
}

// ---------------------------------------------------------------------------

template <class Fn>
int dispatch_field(const std::string& field, Fn&& fn) {
  auto fs = FieldSpec::parse(field);
  if (!fs) throw std::runtime_error("unknown field '" + field + "'");
  if (fs->kind == FieldSpec::Kind::Rationals) {
    Field<Rat> F(*fs);
    return fn(F);
  }
  Field<Zp> F(*fs);
  return fn(F);
}

template <class Fn>
int dispatch_input_field(const CommonOpts& o, Fn&& fn) {
  InputSpec in = common_input(o);
  FieldSpec fs = input_field(in, o.field);
  if (fs.kind == FieldSpec::Kind::Rationals) {
    Field<Rat> F(fs);
    return fn(F);
  }
  Field<Zp> F(fs);
  return fn(F);
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("input", o.input, "Lie algebra file (or catalog:NAME[:param])");
  cmd->add_option("--catalog", o.catalog, "catalog entry name");
  cmd->add_option("--field", o.field, "field for catalog entries: Q or GF(p)");
  cmd->add_option("--param", o.param, "parameter for parametric entries");
  cmd->add_flag("--machine", o.machine, "emit key=value lines");
}

}  // namespace
}  // namespace uea

int uea_cli_main(int argc, char** argv) {
  using namespace uea;
  CLI::App app{"exact isomorphism toolkit for truncated enveloping algebras of"
               " nilpotent Lie algebras"};
  app.require_subcommand(1);

  std::ostringstream echo;
  for (int i = 0; i < argc; ++i) {
    std::string arg = argv[i];
    if (i == 0) {
      auto slash = arg.find_last_of('/');
      if (slash != std::string::npos) arg = arg.substr(slash + 1);
    }
    echo << (i ? " " : "") << arg;
  }

  CommonOpts common;
  std::string trunc_s;
  bool env_table = false, do_search = false;
  int ideal_lcs = 0;
  std::string iso_a, iso_b, cert_path, param, field = "Q";
  long long budget = 100000000;
  int jobs = 1, dim = 0;
  bool machine = false;

  auto* c_validate = app.add_subcommand("validate", "structural checks on a Lie algebra");
  add_common(c_validate, common);

  auto* c_lcs = app.add_subcommand("lcs", "lower central series dimensions and class");
  add_common(c_lcs, common);

  auto* c_gr = app.add_subcommand("gr", "associated graded Lie algebra");
  add_common(c_gr, common);

  auto* c_env = app.add_subcommand("env", "truncated envelope on the PBW basis");
  add_common(c_env, common);
  c_env->add_option("--truncate", trunc_s, "truncation level t >= 2, or class+1")->required();
  c_env->add_flag("--table", env_table, "also print the multiplication table");

  auto* c_center = app.add_subcommand(
      "center", "center dimension of the truncated envelope or of an assoc file");
  add_common(c_center, common);
  c_center->add_option("--truncate", trunc_s, "truncation level for Lie inputs (default class+1)");

  auto* c_fp = app.add_subcommand("fingerprint", "isomorphism-invariant dimension tuple");
  add_common(c_fp, common);
  c_fp->add_option("--truncate", trunc_s, "truncation level for Lie inputs (default class+1)");

  auto* c_quot = app.add_subcommand("quotient", "quotient of the truncated envelope by an ideal");
  add_common(c_quot, common);
  c_quot->add_option("--truncate", trunc_s, "truncation level, or class+1")->required();
  c_quot->add_option("--ideal-lcs", ideal_lcs,
                     "quotient by the ideal generated by this series term")
      ->required();

  auto* c_iso = app.add_subcommand("iso", "isomorphism of truncated envelopes");
  c_iso->add_option("a", iso_a, "first input (file or catalog:NAME[:param])")->required();
  c_iso->add_option("b", iso_b, "second input")->required();
  c_iso->add_option("--truncate", trunc_s, "truncation level, or class+1")->required();
  c_iso->add_option("--field", field, "field for catalog inputs");
  c_iso->add_flag("--search", do_search, "decide by lifting search (finite fields)");
  c_iso->add_option("--certificate", cert_path, "verify a map file instead of searching");
  c_iso->add_option("--budget", budget, "search node budget");
  c_iso->add_option("--jobs", jobs, "parallel workers for the search");
  c_iso->add_flag("--machine", machine, "emit key=value lines");

  auto* c_screen = app.add_subcommand("screen", "bucket catalog entries by graded equivalence");
  c_screen->add_option("--dim", dim, "catalog dimension (5 or 6)")->required();
  c_screen->add_option("--field", field, "field")->required();
  c_screen->add_option("--truncate", trunc_s, "fingerprint truncation (default class+1)");
  c_screen->add_flag("--search", do_search, "run the lifting search on surviving pairs");
  c_screen->add_option("--param", param, "parameter for parametric entries");
  c_screen->add_option("--budget", budget, "search node budget");
  c_screen->add_option("--jobs", jobs, "parallel workers");
  c_screen->add_flag("--machine", machine, "emit key=value lines");

  auto* c_table = app.add_subcommand("table",
                                     "full isomorphism verdict table for a catalog dimension");
  c_table->add_option("--dim", dim, "catalog dimension (5 or 6)")->required();
  c_table->add_option("--field", field, "field")->required();
  c_table->add_option("--param", param, "parameter for parametric entries");
  c_table->add_option("--budget", budget, "search node budget");
  c_table->add_option("--jobs", jobs, "parallel workers");
  c_table->add_flag("--machine", machine, "emit key=value lines");

  auto* c_cat = app.add_subcommand("catalog", "the built-in algebra library");
  c_cat->require_subcommand(1);
  auto* c_cat_list = c_cat->add_subcommand("list", "list entries");
  c_cat_list->add_option("--dim", dim, "filter by dimension");
  c_cat_list->add_option("--field", field, "field context");
  c_cat_list->add_flag("--machine", machine, "emit key=value lines");
  auto* c_cat_show = c_cat->add_subcommand("show", "emit an entry in the file format");
  std::string show_name;
  c_cat_show->add_option("name", show_name, "entry name")->required();
  c_cat_show->add_option("--param", param, "parameter value");
  c_cat_show->add_option("--field", field, "field");
  c_cat_show->add_flag("--machine", machine, "emit key=value lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  auto t0 = Clock::now();
  Report rep;
  rep.machine = machine || common.machine;
  rep.comments = bool(*c_gr) || bool(*c_quot) || bool(*c_cat_show);
  rep.kv("command", echo.str());

  try {
    if (*c_validate || *c_lcs || *c_gr || *c_env || *c_center || *c_fp || *c_quot) {
      return dispatch_input_field(common, [&](auto& F) {
        rep.kv("field", F.spec.str());
        if (*c_validate) return cmd_validate(common, F, rep, t0);
        if (*c_lcs) return cmd_lcs(common, F, rep, t0);
        if (*c_gr) return cmd_gr(common, F, rep, t0);
        if (*c_env) return cmd_env(common, trunc_s, env_table, F, rep, t0);
        if (*c_center) return cmd_center(common, trunc_s, F, rep, t0);
        if (*c_fp) return cmd_fingerprint(common, trunc_s, F, rep, t0);
        return cmd_quotient(common, trunc_s, ideal_lcs, F, rep, t0);
      });
    }
    if (*c_iso) {
      InputSpec a = parse_input_spec(iso_a);
      FieldSpec fs = input_field(a, field);
      if (fs.kind == FieldSpec::Kind::Rationals) {
        Field<Rat> F(fs);
        rep.kv("field", F.spec.str());
        return cmd_iso(iso_a, iso_b, trunc_s, do_search, cert_path, budget, jobs,
                       F, rep, t0);
      }
      Field<Zp> F(fs);
      rep.kv("field", F.spec.str());
      return cmd_iso(iso_a, iso_b, trunc_s, do_search, cert_path, budget, jobs, F,
                     rep, t0);
    }
    if (*c_screen) {
      return dispatch_field(field, [&](auto& F) {
        rep.kv("field", F.spec.str());
        int maxclass = 0;
        for (const auto& e : catalog_entries())
          if (e.dim == dim) maxclass = std::max(maxclass, e.clazz);
        int t = resolve_truncate(trunc_s, maxclass, true);
        return cmd_screen(dim, t, do_search, param, budget, jobs, F, rep, t0);
      });
    }
    if (*c_table) {
      return dispatch_field(field, [&](auto& F) {
        rep.kv("field", F.spec.str());
        return cmd_table(dim, param, budget, jobs, F, rep, t0);
      });
    }
    if (*c_cat_list) return cmd_catalog_list(dim, field, rep, t0);
    if (*c_cat_show) {
      return dispatch_field(field, [&](auto& F) {
        return cmd_catalog_show(show_name, param, F, rep, t0);
      });
    }
  } catch (const std::exception& e) {
    std::cout << rep.out.str();
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
