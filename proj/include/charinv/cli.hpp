#pragma once

// Command-line front end. Every command builds a JSON report whose
// "failures" array decides the exit status:
//   0 no failures, 1 validation or verdict failure, 2 usage/parse error,
//   3 enumeration cap exceeded.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "charinv/abelian.hpp"
#include "charinv/cocycle.hpp"
#include "charinv/duality.hpp"
#include "charinv/io.hpp"
#include "charinv/nu_extend.hpp"
#include "charinv/pair.hpp"

namespace charinv::cli {

using nlohmann::json;

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kCap = 3 };

struct Options {
  std::optional<std::int64_t> modulus;
  std::uint64_t max_enum = 1'000'000;
  std::string format = "json";
  unsigned jobs = 1;

  EnumOptions enum_options() const {
    EnumOptions o;
    o.max_enum = max_enum;
    o.jobs = jobs;
    return o;
  }
};

namespace detail {

inline void render_text(std::ostream& out, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  auto scalar = [](const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  auto flat = [](const json& v) {
    if (!v.is_array()) return false;
    for (auto& x : v)
      if (x.is_object() || (x.is_array() && !x.empty() && x[0].is_object())) return false;
    return true;
  };
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it->is_object() || (it->is_array() && !flat(*it))) {
        out << pad << it.key() << ":\n";
        render_text(out, *it, indent + 1);
      } else {
        out << pad << it.key() << ": " << scalar(*it) << "\n";
      }
    }
  } else if (j.is_array()) {
    std::size_t i = 0;
    for (auto& x : j) {
      out << pad << "- [" << i++ << "]\n";
      render_text(out, x, indent + 1);
    }
  } else {
    out << pad << scalar(j) << "\n";
  }
}

inline void add_failure(json& report, const std::string& where, const Error& e) {
  json f = io::error_json(e);
  f["check"] = where;
  report["failures"].push_back(std::move(f));
}

/// Context built from an instance file, with each stage's outcome recorded.
struct Loaded {
  io::RawInstance raw;
  FiniteGroup g;
  Subgroup h;
  AbelianGroup k;
  std::optional<Bicharacter> kappa;
  std::optional<NuMap> nu;
  std::optional<NuInvariant> nu_inv;
  std::optional<GroupHom> extension;
  ContextPtr ctx;
};

/// Builds everything up to the pair context; the first failing stage throws.
inline Loaded load_context(const std::string& path) {
  io::RawInstance raw = io::load_instance(path);
  FiniteGroup g = io::build_group(raw.group);
  Subgroup h = io::build_subgroup(raw, g);
  AbelianGroup k(raw.k);
  Loaded l{std::move(raw), g, h, k, {}, {}, {}, {}, {}};
  l.kappa = io::build_kappa(l.raw, l.k);
  l.nu = io::build_nu(l.raw, l.g, l.h, l.k);
  l.nu_inv = NuInvariant(*l.nu);
  l.extension = io::build_extension(l.raw, l.g, l.k);
  if (l.extension && !restricts_to(*l.extension, *l.nu))
    throw Error(Errc::NotAnExtension, "extension does not restrict to nu on H");
  l.ctx = make_context(*l.nu_inv, *l.kappa);
  return l;
}

inline std::int64_t default_modulus(const PairContext& ctx) {
  std::int64_t m = checked_lcm(static_cast<std::int64_t>(ctx.group().order()), ctx.target().exponent(),
                               kDefaultModulusCap);
  return checked_lcm(m, ctx.kappa.modulus(), kDefaultModulusCap);
}

inline json pair_json(const CharacteristicPair& p) {
  return {{"modulus", p.modulus()}, {"lambda", io::table_json(p.lambda())}, {"mu", io::table_json(p.mu())}};
}

inline CharacteristicPair load_pair(const Loaded& l) {
  if (!l.raw.pair) throw Error(Errc::ParseError, "field 'pair': missing");
  const auto& t = *l.raw.pair;
  const std::size_t ng = l.g.order(), nh = l.h.size();
  return validate_pair(l.ctx, io::build_table(t.a, ng, nh, t.modulus, "pair/lambda"),
                       io::build_table(t.b, nh, nh, t.modulus, "pair/mu"));
}

inline json certificate_json(const ExtensionCertificate& c, const AbelianGroup& k) {
  json j{{"extends", c.extends}};
  if (c.witness) j["extension"] = io::hom_json(*c.witness, k);
  if (!c.extends)
    j["obstruction"] = {{"kind", obstruction_name(c.obstruction.kind)},
                        {"witness", c.obstruction.witness},
                        {"detail", c.obstruction.detail}};
  return j;
}

// ---------------------------------------------------------------------------

inline json cmd_validate(const std::string& path) {
  json rep{{"command", "validate"}, {"file", path}, {"checks", json::array()}, {"failures", json::array()}};
  const io::RawInstance raw = io::load_instance(path);
  auto stage = [&](const std::string& name, auto&& body) {
    try {
      body();
      rep["checks"].push_back({{"name", name}, {"ok", true}});
      return true;
    } catch (const Error& e) {
      if (e.code() == Errc::ParseError || e.code() == Errc::EnumerationCapExceeded) throw;
      rep["checks"].push_back({{"name", name}, {"ok", false}});
      add_failure(rep, name, e);
      return false;
    }
  };
  FiniteGroup g;
  Subgroup h = trivial_subgroup(g);
  AbelianGroup k(std::vector<std::int64_t>{});
  std::optional<Bicharacter> kappa;
  std::optional<NuInvariant> nu;
  const bool g_ok = stage("group", [&] { g = io::build_group(raw.group); });
  const bool h_ok = g_ok && stage("subgroup", [&] { h = io::build_subgroup(raw, g); });
  const bool k_ok = stage("K", [&] { k = AbelianGroup(raw.k); });
  if (k_ok) stage("kappa", [&] { kappa = io::build_kappa(raw, k); });
  if (h_ok && k_ok)
    stage("nu", [&] {
      const NuMap m = io::build_nu(raw, g, h, k);
      nu = NuInvariant(m);
    });
  if (raw.extension && g_ok && k_ok && nu)
    stage("extension", [&] {
      auto ext = io::build_extension(raw, g, k);
      if (!restricts_to(*ext, nu->map())) throw Error(Errc::NotAnExtension, "extension does not restrict to nu");
    });
  if (raw.pair && nu && kappa) {
    const auto ctx = make_context(*nu, *kappa);
    std::optional<PairReport> prep;
    stage("pair", [&] {
      const auto& t = *raw.pair;
      prep = check_pair(*ctx, io::build_table(t.a, g.order(), h.size(), t.modulus, "pair/lambda"),
                        io::build_table(t.b, h.size(), h.size(), t.modulus, "pair/mu"));
      if (!prep->ok()) {
        const auto& f = prep->failures.front();
        std::vector<std::int64_t> w{f.relation};
        for (Element x : f.witness) w.push_back(static_cast<std::int64_t>(x));
        throw Error(Errc::RelationFails, "relation (" + std::to_string(f.relation) + "): " + f.detail, w);
      }
    });
    if (prep) {
      json rel = json::array();
      for (auto& f : prep->failures)
        rel.push_back({{"relation", f.relation}, {"witness", f.witness}, {"detail", f.detail}});
      rep["relations"] = {{"failed", rel}, {"note", PairReport::kRelation3Reading}};
    }
  }
  if (raw.cocycle && k_ok)
    stage("cocycle", [&] {
      const auto& t = *raw.cocycle;
      validate_2cocycle(k.as_group(), io::build_table(t.a, k.order(), k.order(), t.modulus, "cocycle/values"));
    });
  return rep;
}

inline json cmd_enumerate(const std::string& path, const Options& opt) {
  const Loaded l = load_context(path);
  const std::int64_t m = opt.modulus.value_or(default_modulus(*l.ctx));
  const auto classes = enumerate_lambda_group(l.ctx, m, opt.enum_options());
  std::optional<GroupHom> ext = l.extension;
  ExtensionCertificate cert;
  if (!ext) {
    cert = decide_extension(*l.nu_inv);
    ext = cert.witness;
  }
  json rep{{"command", "enumerate"},
           {"file", path},
           {"modulus", m},
           {"group_order", l.g.order()},
           {"subgroup", l.h.members()},
           {"K", describe(l.k)},
           {"class_count", classes.size()},
           {"classes", json::array()},
           {"failures", json::array()}};
  std::uint64_t total = 0;
  for (auto& c : classes) {
    json block{{"representative", pair_json(c.representative)}, {"size", c.size}};
    block["untwist"] = ext ? pair_json(untwist(c.representative, *ext)) : json(nullptr);
    rep["classes"].push_back(std::move(block));
    total += c.size;
  }
  rep["pair_count"] = total;
  rep["untwist_extension"] = ext ? io::hom_json(*ext, l.k) : json(nullptr);
  if (!ext) rep["untwist_note"] = "nu does not extend to G; untwist needs an extension";
  return rep;
}

inline json cmd_extend(const std::string& path) {
  const Loaded l = load_context(path);
  const auto cert = decide_extension(*l.nu);
  json rep{{"command", "extend"}, {"file", path}, {"failures", json::array()}};
  rep["certificate"] = certificate_json(cert, l.k);
  if (!cert.extends)
    add_failure(rep, "extend", Error(Errc::NotExtendable, cert.obstruction.detail,
                                     {cert.obstruction.witness.begin(), cert.obstruction.witness.end()}));
  return rep;
}

inline json cmd_classify(const std::string& a_path, const std::string& b_path, const Options& opt) {
  const Loaded a = load_context(a_path), b = load_context(b_path);
  // --modulus enlarges the room for c; the pairs themselves are unchanged
  auto at = [&](CharacteristicPair p) {
    return opt.modulus ? rescaled(p, checked_lcm(p.modulus(), *opt.modulus, kDefaultModulusCap)) : p;
  };
  const auto ta = make_triple(at(load_pair(a)), opt.enum_options());
  const auto tb = make_triple(at(load_pair(b)), opt.enum_options());
  const auto v = classify(ta, tb, opt.enum_options());
  json rep{{"command", "classify"},
           {"files", {a_path, b_path}},
           {"verdict", v.same ? "SAME_INVARIANTS" : "DIFFERENT"},
           {"differing", v.same ? json(nullptr) : json(component_name(v.differing))},
           {"hypothesis_certified", v.hypothesis_certified()},
           {"extension", certificate_json(v.extension, a.k)},
           {"canonical", {{"a", pair_json(ta.pair)}, {"b", pair_json(tb.pair)}}},
           {"failures", json::array()}};
  rep["witness_c"] = v.witness ? json{{"modulus", v.witness->modulus()}, {"c", io::table_json(*v.witness)}}
                               : json(nullptr);
  rep["conclusion"] = v.same ? (v.hypothesis_certified() ? "stably conjugate (extension hypothesis certified)"
                                                         : "invariants agree; extension hypothesis not certified")
                             : "invariants differ";
  if (!v.same)
    add_failure(rep, "classify",
                Error(Errc::InvalidArgument, std::string("invariants differ in ") + component_name(v.differing)));
  return rep;
}

inline json cmd_witness(const std::string& path) {
  const io::RawInstance raw = io::load_instance(path);
  const AbelianGroup k(raw.k);
  if (!raw.cocycle) throw Error(Errc::ParseError, "field 'cocycle': missing");
  json rep{{"command", "witness"}, {"file", path}, {"K", describe(k)}, {"failures", json::array()}};
  try {
    const auto mu = validate_2cocycle(
        k.as_group(), io::build_table(raw.cocycle->a, k.order(), k.order(), raw.cocycle->modulus, "cocycle/values"));
    const auto w = symmetric_witness(k, mu);
    json c = json::array();
    for (Element x = 0; x < k.order(); ++x) c.push_back(io::phase_json(w.c.at(x)));
    rep["witness"] = {{"modulus", w.c.modulus()},
                      {"c", io::table_json(w.c)},
                      {"c_phases", c},
                      {"moduli_tried", w.moduli_tried},
                      {"verified", true}};
  } catch (const Error& e) {
    if (e.code() == Errc::ParseError) throw;
    add_failure(rep, "witness", e);
  }
  return rep;
}

inline json duality_json(const DualityReport& r) {
  json v = json::array();
  for (auto& x : r.violations) v.push_back({x.k, x.p});
  return {{"checked", r.checked}, {"violations", v}, {"ok", r.ok()}};
}

inline json cmd_duality(const AbelianGroup& k, const Options& opt) {
  json rep{{"command", "duality"}, {"K", describe(k)}, {"failures", json::array()}};
  const auto w = check_weyl(k, opt.jobs), s = check_second_dual(k, opt.jobs);
  rep["weyl"] = duality_json(w);
  rep["second_dual"] = duality_json(s);
  if (!w.ok()) add_failure(rep, "weyl", Error(Errc::InvalidArgument, "Weyl relation violated"));
  if (!s.ok()) add_failure(rep, "second_dual", Error(Errc::InvalidArgument, "second dual relation violated"));
  return rep;
}

inline json cmd_bezout(std::int64_t p, std::int64_t n) {
  json rep{{"command", "bezout"}, {"p", p}, {"n", n}, {"failures", json::array()}};
  try {
    const auto e = bezout_extension(p, n);
    rep["k"] = e.k;
    rep["l"] = e.l;
    rep["identity"] = std::to_string(p) + "*" + std::to_string(e.k) + " + " + std::to_string(n) + "*" +
                      std::to_string(e.l) + " = 1";
    rep["nu"] = "nu(g) = g*" + std::to_string(e.multiplier) + " mod " + std::to_string(n);
    rep["restricts_correctly"] = e.restricts_correctly();
  } catch (const Error& e) {
    add_failure(rep, "bezout", e);
  }
  return rep;
}

}  // namespace detail

inline int emit(const json& report, const Options& opt, std::ostream& out) {
  if (opt.format == "text")
    detail::render_text(out, report, 0);
  else
    out << report.dump(2) << "\n";
  return report["failures"].empty() ? kPass : kFail;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact invariants of group actions: characteristic pairs, bicharacters, extensions"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--modulus", opt.modulus, "working phase modulus")->check(CLI::PositiveNumber);
    sub->add_option("--max-enum", opt.max_enum, "search-space cap")->check(CLI::PositiveNumber);
    sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
  };
  std::string path, path_b;
  std::vector<std::int64_t> k_orders;
  std::int64_t bp = 0, bn = 0;

  auto* validate = app.add_subcommand("validate", "run every validator on an instance");
  validate->add_option("path", path)->required();
  auto* enumerate = app.add_subcommand("enumerate", "enumerate Lambda(G,H|kappa) at a modulus");
  enumerate->add_option("path", path)->required();
  auto* extend = app.add_subcommand("extend", "decide whether nu extends to G");
  extend->add_option("path", path)->required();
  auto* classify = app.add_subcommand("classify", "compare the invariant triples of two instances");
  classify->add_option("a", path)->required();
  classify->add_option("b", path_b)->required();
  auto* witness = app.add_subcommand("witness", "coboundary witness for a symmetric cocycle on K");
  witness->add_option("path", path)->required();
  auto* duality = app.add_subcommand("duality", "check the Weyl and second-dual relations on K");
  duality->add_option("path", path);
  duality->add_option("--K", k_orders, "cyclic orders of K")->delimiter(',');
  auto* bezout = app.add_subcommand("bezout", "Bezout extension for G = Z");
  bezout->add_option("--p", bp)->required();
  bezout->add_option("--n", bn)->required();
  for (auto* s : {validate, enumerate, extend, classify, witness, duality, bezout}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, eo;
    const int rc = app.exit(e, o, eo);
    out << o.str();
    err << eo.str();
    return rc == 0 ? kPass : kUsage;
  }

  try {
    json rep;
    if (*validate) rep = detail::cmd_validate(path);
    if (*enumerate) rep = detail::cmd_enumerate(path, opt);
    if (*extend) rep = detail::cmd_extend(path);
    if (*classify) rep = detail::cmd_classify(path, path_b, opt);
    if (*witness) rep = detail::cmd_witness(path);
    if (*duality) {
      if (path.empty() == k_orders.empty()) {
        err << "duality: give exactly one of PATH or --K\n";
        return kUsage;
      }
      rep = detail::cmd_duality(path.empty() ? AbelianGroup(k_orders) : AbelianGroup(io::load_instance(path).k), opt);
    }
    if (*bezout) rep = detail::cmd_bezout(bp, bn);
    return emit(rep, opt, out);
  } catch (const Error& e) {
    if (e.code() == Errc::ParseError) {
      err << e.what() << "\n";
      return kUsage;
    }
    json rep{{"command", app.get_subcommands().front()->get_name()}, {"failures", json::array()}};
    detail::add_failure(rep, "load", e);
    emit(rep, opt, out);
    return e.code() == Errc::EnumerationCapExceeded ? kCap : kFail;
  }
}

}  // namespace charinv::cli
