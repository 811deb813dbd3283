#pragma once

// Machine-checkable certificates.
//
// A certificate is a JSON object with sorted keys:
//
//   schema, kind, tool_version, input, input_digest, parameters, witness,
//   verdict, truncation, certificate_digest, created
//
// input_digest is SHA-256 over the canonical dump of `input`;
// certificate_digest covers every field except itself and `created`.
// Verification rebuilds the input and re-checks membership claims of the
// witness directly; it never repeats a search.

#include <aplift/ap_lift.hpp>
#include <aplift/dsl.hpp>
#include <aplift/jset.hpp>
#include <aplift/largeness.hpp>
#include <aplift/towers.hpp>
#include <aplift/vdw.hpp>
#include <aplift/version.hpp>

#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <optional>
#include <string>
#include <vector>

namespace aplift {

using json = nlohmann::json;

inline std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw InternalFault("SHA-256 digest failed");
  std::string hex;
  hex.reserve(2 * len + 7);
  hex += "sha256:";
  static constexpr char kDigits[] = "0123456789abcdef";
  for (unsigned int i = 0; i < len; ++i) {
    hex += kDigits[md[i] >> 4];
    hex += kDigits[md[i] & 0xF];
  }
  return hex;
}

inline std::string canonical_digest(const json& j) { return sha256_hex(j.dump()); }

// A set given either as a DSL expression over a window or as literal set-file
// contents.
class SetSource {
 public:
  SetSource(ExprPtr e, Window w) : expr_(std::move(e)), window_(w) {}
  explicit SetSource(IntSet literal) : literal_(std::move(literal)) {}

  IntSet materialize() const { return literal_ ? *literal_ : evaluate(expr_, *window_); }

  json to_json() const {
    if (literal_) return json{{"file", format_set_file(*literal_, SetFileStyle::bitmap)}};
    return json{{"expr", to_dsl(expr_)}, {"window", {window_->lo(), window_->hi()}}};
  }

  static SetSource from_json(const json& j) {
    if (j.contains("file")) return SetSource(parse_set_file(j.at("file").get<std::string>()));
    const auto& w = j.at("window");
    if (!w.is_array() || w.size() != 2) throw InvalidArgument("set window must be [lo, hi]");
    return SetSource(parse_set_expr(j.at("expr").get<std::string>()), Window(w[0].get<Nat>(), w[1].get<Nat>()));
  }

 private:
  ExprPtr expr_;
  std::optional<Window> window_;
  std::optional<IntSet> literal_;
};

namespace cert {

inline json box_json(const Box2D& b) {
  return json::array({b.a_range().lo(), b.a_range().hi(), b.d_range().lo(), b.d_range().hi()});
}
inline Box2D box_from(const json& j) {
  if (!j.is_array() || j.size() != 4) throw InvalidArgument("box must be [a_lo, a_hi, d_lo, d_hi]");
  return Box2D(j[0].get<Nat>(), j[1].get<Nat>(), j[2].get<Nat>(), j[3].get<Nat>());
}

inline json family_json(const FuncFamily& F) { return F.tables(); }
inline FuncFamily family_from(const json& j) { return FuncFamily(j.get<std::vector<Table>>()); }
inline json family2d_json(const FuncFamily2D& F) {
  json out = json::array();
  for (const auto& [x, y] : F.pairs()) out.push_back(json::array({x, y}));
  return out;
}
inline FuncFamily2D family2d_from(const json& j) {
  std::vector<std::pair<Table, Table>> pairs;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw InvalidArgument("2D family entries must be [g_odd, g_even]");
    pairs.emplace_back(p[0].get<Table>(), p[1].get<Table>());
  }
  return FuncFamily2D(std::move(pairs));
}

inline json jwitness_json(const std::optional<JWitness>& w) {
  if (!w) return nullptr;
  return json{{"a", w->a}, {"H", w->H}};
}
inline std::optional<JWitness> jwitness_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return JWitness{j.at("a").get<Nat>(), j.at("H").get<std::vector<Nat>>()};
}
inline json pws_json(const std::optional<PwsWitness>& w) {
  if (!w) return nullptr;
  return json{{"r", w->r}, {"start", w->start}, {"length", w->length}};
}
inline std::optional<PwsWitness> pws_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return PwsWitness{j.at("r").get<Nat>(), j.at("start").get<Nat>(), j.at("length").get<Nat>()};
}

inline std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline json body_of(const json& c) {
  json body = c;
  body.erase("certificate_digest");
  body.erase("created");
  return body;
}

}  // namespace cert

// Fills in schema, version, digests and timestamp.
inline json seal_certificate(std::string kind, json input, json parameters, json witness, std::string verdict,
                             std::vector<std::string> truncation = {}) {
  json c;
  c["schema"] = kCertificateSchema;
  c["kind"] = std::move(kind);
  c["tool_version"] = kToolVersion;
  c["input_digest"] = canonical_digest(input);
  c["input"] = std::move(input);
  c["parameters"] = std::move(parameters);
  c["witness"] = std::move(witness);
  c["verdict"] = std::move(verdict);
  c["truncation"] = std::move(truncation);
  c["certificate_digest"] = canonical_digest(cert::body_of(c));
  c["created"] = cert::utc_now();
  return c;
}

// Recomputes both digests after a deliberate edit (used to build mutants
// whose only defect is semantic).
inline json reseal_certificate(json c) {
  c["input_digest"] = canonical_digest(c.at("input"));
  c["certificate_digest"] = canonical_digest(cert::body_of(c));
  return c;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

inline json make_ap_certificate(const SetSource& src, const APWitness& w) {
  return seal_certificate("ap", json{{"set", src.to_json()}}, json{{"l", w.l}},
                          json{{"a", w.a}, {"d", w.d}, {"l", w.l}}, "found");
}

inline json make_pws_certificate(const SetSource& src, const PwsWitness& w) {
  return seal_certificate("pws", json{{"set", src.to_json()}}, json{{"r", w.r}, {"L", w.length}}, cert::pws_json(w),
                          "found");
}

struct Pws2DParams {
  Nat l, r1, r2, len1, len2;
  Box2D box;
};

inline json make_pws2d_certificate(const SetSource& src, const Pws2DParams& p, const Box2D& subbox) {
  const Nat hi = src.materialize().window().hi();
  return seal_certificate(
      "pws2d", json{{"set", src.to_json()}},
      json{{"l", p.l}, {"box", cert::box_json(p.box)}, {"r1", p.r1}, {"r2", p.r2}, {"L1", p.len1}, {"L2", p.len2}},
      json{{"subbox", cert::box_json(subbox)}}, "found",
      {"lift excludes pairs with a + l*d > " + std::to_string(hi)});
}

inline json make_jset_certificate(const SetSource& src, const FuncFamily& F, Nat a_max, const JWitness& w) {
  return seal_certificate("jset", json{{"set", src.to_json()}, {"family", cert::family_json(F)}},
                          json{{"a_max", a_max}, {"T", F.horizon()}}, cert::jwitness_json(w), "found",
                          {"values a + sum f(t) outside the window count as non-members"});
}

inline json make_jset2d_certificate(const SetSource& src, const FuncFamily2D& F, Nat b, Nat l, Nat a_max,
                                    const JWitness2D& w) {
  return seal_certificate("jset2d", json{{"set", src.to_json()}, {"family2d", cert::family2d_json(F)}},
                          json{{"b", b}, {"l", l}, {"a_max", a_max}, {"T", F.horizon()}},
                          json{{"a1", w.a1}, {"a2", w.a2}, {"H", w.H}}, "found",
                          {"progression terms outside the window count as non-members"});
}

inline json make_vdw_certificate(int n, int colors, int k, const VdwResult& res,
                                 const std::optional<std::vector<RefutationLeaf>>& refutation) {
  json input{{"n", n}, {"colors", colors}, {"len", k}};
  json params{{"strategy", to_string(res.strategy)}};
  if (res.verdict == VdwVerdict::fails) return seal_certificate("vdw", input, params, json{{"coloring", *res.counterexample}}, "false");
  if (res.verdict != VdwVerdict::holds || !refutation) throw InvalidArgument("no vdw certificate for an unknown outcome");
  json leaves = json::array();
  for (const auto& l : *refutation) leaves.push_back(json::array({l.prefix, l.a, l.d}));
  return seal_certificate("vdw", input, params, json{{"refutation", leaves}}, "true");
}

// Inputs of a chain certificate besides the chain itself.
struct ChainCertOptions {
  std::vector<FuncFamily> families;
  // Lifted-translate probes: (a, b) in B_n with a, b <= probe_max for n <= probe_levels.
  std::optional<Nat> lift_l;
  std::optional<Box2D> lift_box;
  Nat probe_max = 32;
  std::size_t probe_levels = 0;  // 0: every level
};

struct LiftedProbe {
  std::size_t n;
  Nat a, b;
  std::optional<std::size_t> N;
  bool verified = false;
};

// Runs eq1_inclusion_search and verify_lifted_translate over every probe.
inline std::vector<LiftedProbe> lifted_probes(const Chain& chain, const Chain2D& c2d, Nat probe_max,
                                              std::size_t probe_levels) {
  std::vector<LiftedProbe> out;
  const std::size_t top = probe_levels == 0 ? chain.depth() : std::min(probe_levels, chain.depth());
  for (std::size_t n = 1; n <= top; ++n) {
    const Set2D& bn = c2d.level(n);
    for (Nat b = bn.box().d_range().lo(); b <= std::min(probe_max, bn.box().d_range().hi()); ++b)
      for (Nat a = bn.box().a_range().lo(); a <= std::min(probe_max, bn.box().a_range().hi()); ++a) {
        if (!bn.contains(a, b)) continue;
        LiftedProbe p{n, a, b, eq1_inclusion_search(chain, n, a, b, c2d.l), false};
        if (p.N) p.verified = verify_lifted_translate(c2d, n, *p.N, a, b);
        out.push_back(p);
      }
  }
  return out;
}

namespace cert {
inline json chain_input(const Chain& chain, const std::vector<FuncFamily>& families) {
  json levels = json::array();
  for (const auto& lvl : chain.levels()) levels.push_back(SetSource(lvl).to_json());
  json in{{"chain", {{"kind", to_string(chain.kind())}, {"levels", levels}}}};
  if (!families.empty()) {
    json fs = json::array();
    for (const auto& F : families) fs.push_back(family_json(F));
    in["families"] = fs;
  }
  return in;
}
}  // namespace cert

inline json make_chain_certificate(const Chain& chain, const ChainReport& rep, const ChainCertOptions& opt) {
  json params{{"x_max", rep.x_max}};
  if (rep.r) params["r"] = *rep.r;
  if (rep.L) params["L"] = *rep.L;
  if (rep.a_max) params["a_max"] = *rep.a_max;

  json probes = json::array();
  for (const auto& p : rep.probes)
    probes.push_back(json::array({p.level, p.x, p.m ? json(*p.m) : json(nullptr)}));
  json witness{{"probes", probes}};
  if (!rep.pws.empty()) {
    json pws = json::array();
    for (const auto& w : rep.pws) pws.push_back(cert::pws_json(w));
    witness["pws"] = pws;
  }
  if (!rep.jsets.empty()) {
    json js = json::array();
    for (const auto& row : rep.jsets) {
      json r = json::array();
      for (const auto& w : row) r.push_back(cert::jwitness_json(w));
      js.push_back(r);
    }
    witness["jsets"] = js;
  }

  bool lifted_ok = true;
  if (opt.lift_l) {
    const Box2D box = opt.lift_box ? *opt.lift_box : induced_box(chain.window(), *opt.lift_l);
    params["lift"] = json{{"l", *opt.lift_l}, {"box", cert::box_json(box)}, {"probe_max", opt.probe_max},
                          {"probe_levels", opt.probe_levels}};
    Chain2D c2d = lift_chain(chain, *opt.lift_l, box);
    json lp = json::array();
    for (const auto& p : lifted_probes(chain, c2d, opt.probe_max, opt.probe_levels)) {
      lp.push_back(json::array({p.n, p.a, p.b, p.N ? json(*p.N) : json(nullptr)}));
      if (p.N && !p.verified) lifted_ok = false;
    }
    witness["lifted"] = lp;
  }
  const bool pass = rep.passed() && lifted_ok;
  auto notes = rep.notes;
  if (opt.lift_l) notes.push_back("lifted translates checked only where (a1 + a) + l*(b1 + b) <= window.hi");
  return seal_certificate("chain", cert::chain_input(chain, opt.families), params, witness, pass ? "pass" : "fail",
                          notes);
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

struct VerifyOutcome {
  enum class Status { valid, invalid, digest_mismatch, unknown_kind, malformed };
  Status status = Status::invalid;
  std::string detail;
  bool ok() const noexcept { return status == Status::valid; }
};

namespace cert {

inline VerifyOutcome fail(VerifyOutcome::Status s, std::string why) { return {s, std::move(why)}; }
inline VerifyOutcome invalid(std::string why) { return fail(VerifyOutcome::Status::invalid, std::move(why)); }
inline VerifyOutcome valid() { return {VerifyOutcome::Status::valid, "ok"}; }

inline VerifyOutcome check_ap(const json& c) {
  IntSet a = SetSource::from_json(c.at("input").at("set")).materialize();
  const auto& w = c.at("witness");
  APWitness ap{w.at("a").get<Nat>(), w.at("d").get<Nat>(), w.at("l").get<Nat>()};
  if (ap.l != c.at("parameters").at("l").get<Nat>()) return invalid("witness length differs from parameter l");
  if (c.at("verdict") != "found") return invalid("unexpected verdict");
  return verify_ap(a, ap) ? valid() : invalid("progression term missing from the set");
}

inline VerifyOutcome check_pws(const json& c) {
  IntSet a = SetSource::from_json(c.at("input").at("set")).materialize();
  auto w = pws_from(c.at("witness"));
  const auto& p = c.at("parameters");
  if (!w || w->r != p.at("r").get<Nat>() || w->length != p.at("L").get<Nat>())
    return invalid("witness parameters differ from (r, L)");
  if (c.at("verdict") != "found") return invalid("unexpected verdict");
  return verify_pws_witness(a, *w) ? valid() : invalid("interval is not r-syndetic");
}

inline VerifyOutcome check_pws2d(const json& c) {
  IntSet a = SetSource::from_json(c.at("input").at("set")).materialize();
  const auto& p = c.at("parameters");
  const Nat l = p.at("l").get<Nat>();
  const Box2D box = box_from(p.at("box"));
  const Box2D sub = box_from(c.at("witness").at("subbox"));
  if (!box.contains(sub)) return invalid("sub-box leaves the lift box");
  if (sub.width() != p.at("L1").get<Nat>() || sub.height() != p.at("L2").get<Nat>())
    return invalid("sub-box dimensions differ from (L1, L2)");
  if (c.at("verdict") != "found") return invalid("unexpected verdict");
  Set2D local = Set2D::from_predicate(sub, [&](Nat x, Nat d) { return verify_ap(a, APWitness{x, d, l}); });
  return is_syndetic_2d(local, sub, p.at("r1").get<Nat>(), p.at("r2").get<Nat>())
             ? valid()
             : invalid("sub-box has an empty block");
}

inline VerifyOutcome check_jset(const json& c) {
  IntSet a = SetSource::from_json(c.at("input").at("set")).materialize();
  FuncFamily F = family_from(c.at("input").at("family"));
  auto w = jwitness_from(c.at("witness"));
  if (!w) return invalid("missing witness");
  if (w->a > c.at("parameters").at("a_max").get<Nat>()) return invalid("a exceeds a_max");
  if (c.at("parameters").at("T").get<Nat>() != F.horizon()) return invalid("horizon differs from the family");
  if (c.at("verdict") != "found") return invalid("unexpected verdict");
  return verify_jwitness(a, F, *w) ? valid() : invalid("a + sum f(t) misses the set");
}

inline VerifyOutcome check_jset2d(const json& c) {
  IntSet a = SetSource::from_json(c.at("input").at("set")).materialize();
  FuncFamily2D F = family2d_from(c.at("input").at("family2d"));
  const auto& p = c.at("parameters");
  const auto& w = c.at("witness");
  JWitness2D jw{w.at("a1").get<Nat>(), w.at("a2").get<Nat>(), w.at("H").get<std::vector<Nat>>()};
  const Nat b = p.at("b").get<Nat>();
  if (b < 1) return invalid("b must be positive");
  if (jw.a2 != b * static_cast<Nat>(jw.H.size())) return invalid("second coordinate is not b|H|");
  if (jw.a1 > p.at("a_max").get<Nat>()) return invalid("a exceeds a_max");
  if (p.at("T").get<Nat>() != F.horizon()) return invalid("horizon differs from the family");
  if (c.at("verdict") != "found") return invalid("unexpected verdict");
  return verify_jwitness2d(a, F, p.at("l").get<Nat>(), jw) ? valid() : invalid("a translated pair is not in C");
}

inline VerifyOutcome check_vdw(const json& c) {
  const auto& in = c.at("input");
  const int n = in.at("n").get<int>(), colors = in.at("colors").get<int>(), k = in.at("len").get<int>();
  const auto& w = c.at("witness");
  const auto verdict = c.at("verdict").get<std::string>();
  if (verdict == "false") {
    if (!w.contains("coloring")) return invalid("missing coloring");
    return verify_vdw_coloring(n, colors, k, w.at("coloring").get<Coloring>()) ? valid()
                                                                              : invalid("coloring has a monochromatic AP");
  }
  if (verdict == "true") {
    if (!w.contains("refutation")) return invalid("missing refutation tree");
    std::vector<RefutationLeaf> leaves;
    for (const auto& l : w.at("refutation")) {
      if (!l.is_array() || l.size() != 3) return invalid("refutation leaves must be [prefix, a, d]");
      leaves.push_back({l[0].get<Coloring>(), l[1].get<int>(), l[2].get<int>()});
    }
    return verify_vdw_refutation(n, colors, k, leaves) ? valid() : invalid("refutation tree does not cover");
  }
  return invalid("unknown vdw verdict");
}

inline VerifyOutcome check_chain(const json& c) {
  const auto& in = c.at("input");
  std::vector<IntSet> levels;
  for (const auto& l : in.at("chain").at("levels")) levels.push_back(SetSource::from_json(l).materialize());
  Chain chain(std::move(levels), parse_chain_kind(in.at("chain").at("kind").get<std::string>()));
  std::vector<FuncFamily> families;
  if (in.contains("families"))
    for (const auto& f : in.at("families")) families.push_back(family_from(f));

  const auto& p = c.at("parameters");
  const auto& w = c.at("witness");
  ChainReport rep;
  rep.kind = chain.kind();
  rep.x_max = p.at("x_max").get<Nat>();
  for (const auto& pr : w.at("probes")) {
    if (!pr.is_array() || pr.size() != 3) return invalid("probes must be [n, x, m]");
    rep.probes.push_back({pr[0].get<std::size_t>(), pr[1].get<Nat>(),
                          pr[2].is_null() ? std::nullopt : std::optional<std::size_t>(pr[2].get<std::size_t>())});
  }
  if (p.contains("r")) rep.r = p.at("r").get<Nat>();
  if (p.contains("L")) rep.L = p.at("L").get<Nat>();
  if (p.contains("a_max")) rep.a_max = p.at("a_max").get<Nat>();
  if (w.contains("pws"))
    for (const auto& x : w.at("pws")) rep.pws.push_back(pws_from(x));
  if (w.contains("jsets"))
    for (const auto& row : w.at("jsets")) {
      std::vector<std::optional<JWitness>> r;
      for (const auto& x : row) r.push_back(jwitness_from(x));
      rep.jsets.push_back(std::move(r));
    }
  if (chain.kind() == ChainKind::quasi_central && (!rep.r || !rep.L || rep.pws.size() != chain.depth()))
    return invalid("quasi-central evidence incomplete");
  if (chain.kind() == ChainKind::c_set && !families.empty() && rep.jsets.size() != chain.depth())
    return invalid("J-set evidence incomplete");
  if (!recheck_chain_report(chain, rep, families)) return invalid("chain report does not re-verify");

  bool lifted_ok = true;
  if (p.contains("lift")) {
    const auto& lp = p.at("lift");
    const Nat l = lp.at("l").get<Nat>();
    const Box2D box = box_from(lp.at("box"));
    const Nat probe_max = lp.at("probe_max").get<Nat>();
    const auto probe_levels = lp.at("probe_levels").get<std::size_t>();
    Chain2D c2d = lift_chain(chain, l, box);
    const auto& recorded = w.at("lifted");
    // The probe list must be exactly the members of B_n in the probe range.
    std::size_t idx = 0;
    const std::size_t top = probe_levels == 0 ? chain.depth() : std::min(probe_levels, chain.depth());
    for (std::size_t n = 1; n <= top; ++n) {
      const Set2D& bn = c2d.level(n);
      for (Nat b = box.d_range().lo(); b <= std::min(probe_max, box.d_range().hi()); ++b)
        for (Nat a = box.a_range().lo(); a <= std::min(probe_max, box.a_range().hi()); ++a) {
          if (!bn.contains(a, b)) continue;
          if (idx >= recorded.size()) return invalid("lifted probe list incomplete");
          const auto& r = recorded[idx++];
          if (!r.is_array() || r.size() != 4 || r[0].get<std::size_t>() != n || r[1].get<Nat>() != a ||
              r[2].get<Nat>() != b)
            return invalid("lifted probe list out of order");
          if (r[3].is_null()) continue;
          const auto N = r[3].get<std::size_t>();
          if (N < n || N > chain.depth()) return invalid("lifted probe level out of range");
          std::vector<Nat> shifts;
          for (Nat i = 0; i <= l; ++i) shifts.push_back(a + i * b);
          if (!inclusion_under_shifts(chain.level(N), chain.level(n), shifts))
            return invalid("recorded N fails the translate inclusion");
          if (!verify_lifted_translate(c2d, n, N, a, b)) lifted_ok = false;
        }
    }
    if (idx != recorded.size()) return invalid("lifted probe list has extra entries");
  }
  const bool pass = rep.passed() && lifted_ok;
  if (c.at("verdict") != (pass ? "pass" : "fail")) return invalid("verdict does not match the evidence");
  return valid();
}

}  // namespace cert

// `expected_input`, when given, must have the digest recorded in the
// certificate (checks the certificate against a caller-supplied input).
inline VerifyOutcome verify_certificate(const json& c, const json* expected_input = nullptr) {
  using S = VerifyOutcome::Status;
  try {
    if (!c.is_object() || c.value("schema", "") != kCertificateSchema)
      return cert::fail(S::malformed, "not an " + std::string(kCertificateSchema) + " certificate");
    if (c.at("input_digest") != canonical_digest(c.at("input")))
      return cert::fail(S::digest_mismatch, "input digest does not match the embedded input");
    if (expected_input && c.at("input_digest") != canonical_digest(*expected_input))
      return cert::fail(S::digest_mismatch, "certificate was issued for a different input");
    if (c.at("certificate_digest") != canonical_digest(cert::body_of(c)))
      return cert::fail(S::digest_mismatch, "certificate digest does not match its contents");

    const auto kind = c.at("kind").get<std::string>();
    if (kind == "ap") return cert::check_ap(c);
    if (kind == "pws") return cert::check_pws(c);
    if (kind == "pws2d") return cert::check_pws2d(c);
    if (kind == "jset") return cert::check_jset(c);
    if (kind == "jset2d") return cert::check_jset2d(c);
    if (kind == "chain") return cert::check_chain(c);
    if (kind == "vdw") return cert::check_vdw(c);
    return cert::fail(S::unknown_kind, "unknown certificate kind '" + kind + "'");
  } catch (const json::exception& e) {
    return cert::fail(S::malformed, std::string("malformed payload: ") + e.what());
  } catch (const Error& e) {
    return cert::fail(S::malformed, std::string("malformed payload: ") + e.what());
  }
}

}  // namespace aplift
