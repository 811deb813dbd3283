#pragma once

// Command-line front end. run_command returns the process exit code:
//   0 ok, 1 negative or absent result, 2 invalid input,
//   3 search budget exceeded, 4 certificate invalid.

#include <aplift/certificate.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace aplift::cli {

enum Exit : int { kOk = 0, kAbsent = 1, kInvalidInput = 2, kBudget = 3, kBadCertificate = 4 };

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InvalidArgument("cannot write '" + path + "'");
}

inline std::pair<Nat, Nat> parse_range(const std::string& s, const char* what) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw InvalidArgument(std::string(what) + " must look like lo:hi");
  auto num = [&](std::string_view t) {
    Nat v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size())
      throw InvalidArgument(std::string(what) + ": '" + std::string(t) + "' is not an integer");
    return v;
  };
  std::string_view sv(s);
  return {num(sv.substr(0, colon)), num(sv.substr(colon + 1))};
}

inline Window parse_window(const std::string& s) {
  auto [lo, hi] = parse_range(s, "--window");
  return Window(lo, hi);
}

// "a_lo:a_hi,d_lo:d_hi"
inline Box2D parse_box(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw InvalidArgument("--box must look like a_lo:a_hi,d_lo:d_hi");
  auto [alo, ahi] = parse_range(s.substr(0, comma), "--box");
  auto [dlo, dhi] = parse_range(s.substr(comma + 1), "--box");
  return Box2D(alo, ahi, dlo, dhi);
}

struct SetOptions {
  std::string expr, file, window;

  void attach(CLI::App* app) {
    auto* e = app->add_option("--set", expr, "set expression in the DSL");
    auto* f = app->add_option("--set-file", file, "set file (bitmap or list form)");
    app->add_option("--window", window, "window lo:hi for --set");
    e->excludes(f);
  }
  bool given() const { return !expr.empty() || !file.empty(); }

  SetSource load() const {
    if (!file.empty()) return SetSource(parse_set_file(read_file(file)));
    if (expr.empty()) throw InvalidArgument("one of --set or --set-file is required");
    if (window.empty()) throw InvalidArgument("--set needs --window lo:hi");
    return SetSource(parse_set_expr(expr), parse_window(window));
  }
};

struct Output {
  std::ostream& out;
  std::string cert_path;

  void report(const json& j) const { out << j.dump(2) << '\n'; }
  void certificate(const json& c) const {
    if (!cert_path.empty()) write_file(cert_path, c.dump(2) + "\n");
  }
};

inline json window_json(const IntSet& a) { return json::array({a.window().lo(), a.window().hi()}); }

// ---------------------------------------------------------------------------

inline int cmd_analyze(const SetOptions& so, std::optional<Nat> r, std::optional<Nat> L, const Output& o) {
  SetSource src = so.load();
  IntSet a = src.materialize();
  const Interval whole = a.window();
  GapProfile gp = gap_profile(a, whole);
  json rep{{"window", window_json(a)},
           {"size", a.size()},
           {"density", static_cast<double>(a.size()) / static_cast<double>(whole.width())},
           {"longest_gap", gp.longest_miss_run()},
           {"longest_run", longest_member_run(a)},
           {"syndetic_r", a.empty() ? json(nullptr) : json(gp.longest_miss_run() + 1)}};
  int code = kOk;
  if (L) {
    if (r) {
      auto w = find_pws_witness(a, *r, *L);
      rep["pws"] = cert::pws_json(w);
      if (w)
        o.certificate(make_pws_certificate(src, *w));
      else
        code = kAbsent;
    } else {
      auto m = min_r_for_L(a, *L);
      rep["min_r"] = m ? json(*m) : json(nullptr);
      if (!m) code = kAbsent;
    }
  } else if (r) {
    throw InvalidArgument("--r needs --L");
  }
  o.report(rep);
  return code;
}

inline int cmd_ap(const SetOptions& so, Nat l, const Output& o) {
  SetSource src = so.load();
  IntSet a = src.materialize();
  auto w = ap_search(a, l);
  if (!w) {
    o.report(json{{"result", "absent"}, {"l", l}});
    return kAbsent;
  }
  o.report(json{{"result", "found"}, {"a", w->a}, {"d", w->d}, {"l", w->l}});
  o.certificate(make_ap_certificate(src, *w));
  return kOk;
}

struct LiftArgs {
  Nat l = 2;
  std::string box;
  std::optional<Nat> r1, r2, L1, L2;
  std::string set2d_out;
};

inline int cmd_lift(const SetOptions& so, const LiftArgs& args, const Output& o) {
  SetSource src = so.load();
  IntSet a = src.materialize();
  const Box2D box = args.box.empty() ? induced_box(a.window(), args.l) : parse_box(args.box);
  Set2D b = lift(a, args.l, box);
  if (!args.set2d_out.empty()) write_file(args.set2d_out, format_set2d(b));
  json rep{{"l", args.l}, {"box", cert::box_json(box)}, {"size", b.size()}};
  int code = kOk;
  const bool any = args.r1 || args.r2 || args.L1 || args.L2;
  if (any) {
    if (!args.r1 || !args.r2) throw InvalidArgument("--r1 and --r2 are required together");
    const Nat L1 = args.L1.value_or(box.width()), L2 = args.L2.value_or(box.height());
    auto sub = find_pws_witness_2d(b, *args.r1, *args.r2, L1, L2);
    rep["pws2d"] = sub ? cert::box_json(*sub) : json(nullptr);
    if (sub)
      o.certificate(make_pws2d_certificate(src, {args.l, *args.r1, *args.r2, L1, L2, box}, *sub));
    else
      code = kAbsent;
  }
  o.report(rep);
  return code;
}

inline int cmd_jset(const SetOptions& so, const std::string& family, std::optional<Nat> a_max, const Output& o) {
  SetSource src = so.load();
  IntSet a = src.materialize();
  FuncFamily F = parse_family(read_file(family));
  const Nat amax = a_max.value_or(a.window().hi());
  auto w = jset_witness(a, F, amax);
  o.report(json{{"a_max", amax}, {"witness", cert::jwitness_json(w)}});
  if (!w) return kAbsent;
  o.certificate(make_jset_certificate(src, F, amax, *w));
  return kOk;
}

inline int cmd_transfer(const SetOptions& so, const std::string& family2d, Nat b, Nat l, std::optional<Nat> a_max,
                        const Output& o) {
  SetSource src = so.load();
  IntSet a = src.materialize();
  FuncFamily2D F = parse_family2d(read_file(family2d));
  const Nat amax = a_max.value_or(a.window().hi());
  auto w = transfer_witness(a, F, b, l, amax);
  if (!w) {
    o.report(json{{"result", "absent"}, {"a_max", amax}});
    return kAbsent;
  }
  o.report(json{{"result", "found"}, {"a", json::array({w->a1, w->a2})}, {"H", w->H}});
  o.certificate(make_jset2d_certificate(src, F, b, l, amax, *w));
  return kOk;
}

struct TowerArgs {
  std::string chain_file, kind = "quasi-central", window;
  std::vector<std::string> levels, families;
  Nat x_max = 1;
  std::optional<Nat> r, L, a_max, lift_len;
  std::string box;
  Nat probe_max = 32;
  std::size_t probe_levels = 0;
};

inline int cmd_tower(const TowerArgs& t, const Output& o) {
  std::optional<Chain> chain;
  if (!t.chain_file.empty()) {
    chain.emplace(parse_chain_file(read_file(t.chain_file)));
  } else {
    if (t.levels.empty()) throw InvalidArgument("give --chain FILE or --level EXPR (repeated) with --window");
    if (t.window.empty()) throw InvalidArgument("--level needs --window lo:hi");
    const Window w = parse_window(t.window);
    std::vector<IntSet> lv;
    for (const auto& e : t.levels) lv.push_back(evaluate(parse_set_expr(e), w));
    chain.emplace(std::move(lv), parse_chain_kind(t.kind));
  }

  ChainCertOptions opt;
  ChainReport rep;
  if (chain->kind() == ChainKind::quasi_central) {
    if (!t.r || !t.L) throw InvalidArgument("a quasi-central chain needs --r and --L");
    rep = check_quasicentral(*chain, *t.r, *t.L, t.x_max);
  } else {
    if (t.families.empty()) throw InvalidArgument("a c-set chain needs at least one --family");
    for (const auto& f : t.families) opt.families.push_back(parse_family(read_file(f)));
    rep = check_cset(*chain, opt.families, t.a_max.value_or(chain->window().hi()), t.x_max);
  }
  if (t.lift_len) {
    opt.lift_l = *t.lift_len;
    if (!t.box.empty()) opt.lift_box = parse_box(t.box);
    opt.probe_max = t.probe_max;
    opt.probe_levels = t.probe_levels;
  }
  json c = make_chain_certificate(*chain, rep, opt);
  json summary{{"verdict", c.at("verdict")},
               {"translate_ok", rep.translate_ok()},
               {"largeness_ok", rep.largeness_ok()},
               {"depth", chain->depth()},
               {"probes", rep.probes.size()},
               {"notes", c.at("truncation")}};
  if (c.at("witness").contains("lifted")) {
    std::size_t checked = 0, shallow = 0;
    for (const auto& p : c.at("witness").at("lifted")) (p[3].is_null() ? shallow : checked)++;
    summary["lifted_checked"] = checked;
    summary["lifted_too_shallow"] = shallow;
  }
  o.report(summary);
  o.certificate(c);
  return c.at("verdict") == "pass" ? kOk : kAbsent;
}

inline int cmd_vdw(int n, int colors, int k, const std::string& strategy, const Output& o) {
  VdwStrategy s = VdwStrategy::automatic;
  if (strategy == "exhaustive")
    s = VdwStrategy::exhaustive;
  else if (strategy == "backtracking")
    s = VdwStrategy::backtracking;
  else if (strategy != "auto")
    throw InvalidArgument("--strategy must be auto, exhaustive or backtracking");
  const auto budget = SearchBudget::from_env();
  VdwResult res = vdw_check(n, colors, k, budget, s);
  json rep{{"n", n}, {"colors", colors}, {"len", k}, {"strategy", to_string(res.strategy)}, {"nodes", res.nodes}};
  switch (res.verdict) {
    case VdwVerdict::unknown:
      rep["verdict"] = "unknown";
      o.report(rep);
      throw BudgetExceeded("van der Waerden search ran out of budget after " + std::to_string(res.nodes) + " nodes");
    case VdwVerdict::fails:
      rep["verdict"] = false;
      rep["coloring"] = *res.counterexample;
      o.report(rep);
      o.certificate(make_vdw_certificate(n, colors, k, res, std::nullopt));
      return kAbsent;
    case VdwVerdict::holds:
      break;
  }
  rep["verdict"] = true;
  auto tree = vdw_refutation(n, colors, k, budget);
  if (tree) {
    rep["refutation_leaves"] = tree->size();
    o.certificate(make_vdw_certificate(n, colors, k, res, tree));
  } else {
    rep["refutation_leaves"] = nullptr;
    if (!o.cert_path.empty()) throw BudgetExceeded("refutation tree exceeds the search budget; no certificate written");
  }
  o.report(rep);
  return kOk;
}

inline int cmd_verify(const std::string& path, const SetOptions& so, std::ostream& out) {
  json c;
  try {
    c = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InvalidArgument("'" + path + "' is not JSON: " + e.what());
  }
  std::optional<json> expected;
  if (so.given()) {
    if (!c.is_object() || !c.contains("input") || !c.at("input").contains("set"))
      throw InvalidArgument("--set was given but the certificate has no set input");
    expected = c.at("input");
    (*expected)["set"] = so.load().to_json();
  }
  VerifyOutcome v = verify_certificate(c, expected ? &*expected : nullptr);
  static constexpr const char* kNames[] = {"valid", "invalid", "digest-mismatch", "unknown-kind", "malformed"};
  out << json{{"status", kNames[static_cast<int>(v.status)]}, {"detail", v.detail}}.dump(2) << '\n';
  return v.ok() ? kOk : kBadCertificate;
}

// ---------------------------------------------------------------------------

inline int run_command(int argc, const char* const* argv, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  CLI::App app{"Progression lifts, largeness witnesses and chain checks on windows of N", "aplift"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string cert_out;
  SetOptions so;
  std::optional<Nat> r, L, a_max;
  Nat l = 2, b = 1;
  LiftArgs la;
  TowerArgs ta;
  std::string family, family2d, strategy = "auto", cert_path;
  int n = 0, colors = 2, k = 3;

  auto add_out = [&](CLI::App* s) { s->add_option("--out", cert_out, "write the certificate to this path"); };

  auto* analyze = app.add_subcommand("analyze", "gap profile, syndeticity and piecewise-syndetic witness");
  so.attach(analyze);
  analyze->add_option("--r", r, "block length r")->check(CLI::PositiveNumber);
  analyze->add_option("--L", L, "interval length L")->check(CLI::PositiveNumber);
  add_out(analyze);

  auto* ap = app.add_subcommand("ap", "least progression a, a+d, ..., a+ld inside the set");
  so.attach(ap);
  ap->add_option("--len", l, "l (the progression has l + 1 terms)")->required()->check(CLI::PositiveNumber);
  add_out(ap);

  auto* lft = app.add_subcommand("lift", "lift to pairs (a, d) and search a 2D piecewise-syndetic witness");
  so.attach(lft);
  lft->add_option("--len", la.l, "l")->required()->check(CLI::PositiveNumber);
  lft->add_option("--box", la.box, "a_lo:a_hi,d_lo:d_hi (default: induced box)");
  lft->add_option("--r1", la.r1, "block side along a")->check(CLI::PositiveNumber);
  lft->add_option("--r2", la.r2, "block side along d")->check(CLI::PositiveNumber);
  lft->add_option("--L1", la.L1, "sub-box width along a")->check(CLI::PositiveNumber);
  lft->add_option("--L2", la.L2, "sub-box height along d")->check(CLI::PositiveNumber);
  lft->add_option("--set2d-out", la.set2d_out, "write the lifted set to this path");
  add_out(lft);

  auto* js = app.add_subcommand("jset", "bounded J-set witness search");
  so.attach(js);
  js->add_option("--family", family, "family file")->required();
  js->add_option("--a-max", a_max, "largest shift a (default: window hi)")->check(CLI::PositiveNumber);
  add_out(js);

  auto* tr = app.add_subcommand("transfer", "J-set witness for the progression set via the family G");
  so.attach(tr);
  tr->add_option("--family2d", family2d, "2D family file")->required();
  tr->add_option("--b", b, "common difference offset b")->check(CLI::PositiveNumber);
  tr->add_option("--len", l, "l")->required()->check(CLI::PositiveNumber);
  tr->add_option("--a-max", a_max, "largest shift a1")->check(CLI::PositiveNumber);
  add_out(tr);

  auto* tw = app.add_subcommand("tower", "check a decreasing chain and its lifted translates");
  tw->add_option("--chain", ta.chain_file, "chain file");
  tw->add_option("--level", ta.levels, "level expression (repeat, outermost first)");
  tw->add_option("--window", ta.window, "window lo:hi for --level");
  tw->add_option("--kind", ta.kind, "quasi-central or c-set");
  tw->add_option("--x-max", ta.x_max, "largest translate x probed")->required()->check(CLI::PositiveNumber);
  tw->add_option("--r", ta.r, "block length r for each level")->check(CLI::PositiveNumber);
  tw->add_option("--L", ta.L, "interval length L for each level")->check(CLI::PositiveNumber);
  tw->add_option("--family", ta.families, "family file (repeat)");
  tw->add_option("--a-max", ta.a_max, "largest shift a in J-set searches")->check(CLI::PositiveNumber);
  tw->add_option("--lift-len", ta.lift_len, "also check lifted translates for this l")->check(CLI::PositiveNumber);
  tw->add_option("--box", ta.box, "lift box a_lo:a_hi,d_lo:d_hi (default: induced box)");
  tw->add_option("--probe-max", ta.probe_max, "probe (a, b) with a, b up to this bound")->check(CLI::PositiveNumber);
  tw->add_option("--probe-levels", ta.probe_levels, "probe levels 1..n only (0: all)");
  add_out(tw);

  auto* vd = app.add_subcommand("vdw", "does every coloring of [1, n] have a monochromatic k-term progression");
  vd->add_option("--n", n, "window length n")->required()->check(CLI::PositiveNumber);
  vd->add_option("--colors", colors, "number of colors (default 2)")->check(CLI::PositiveNumber);
  vd->add_option("--len", k, "k, the number of terms")->check(CLI::PositiveNumber);
  vd->add_option("--strategy", strategy, "auto, exhaustive or backtracking");
  add_out(vd);

  auto* ver = app.add_subcommand("verify", "re-check a certificate");
  ver->add_option("certificate", cert_path, "certificate JSON file")->required();
  so.attach(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    const Output o{out, cert_out};
    if (*analyze) return cmd_analyze(so, r, L, o);
    if (*ap) return cmd_ap(so, l, o);
    if (*lft) return cmd_lift(so, la, o);
    if (*js) return cmd_jset(so, family, a_max, o);
    if (*tr) return cmd_transfer(so, family2d, b, l, a_max, o);
    if (*tw) return cmd_tower(ta, o);
    if (*vd) return cmd_vdw(n, colors, k, strategy, o);
    if (*ver) return cmd_verify(cert_path, so, out);
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const InternalFault& e) {
    err << "internal error: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace aplift::cli
