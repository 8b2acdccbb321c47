#pragma once

// JSON instance files (schema "charinv-instance/1") and report helpers.
//
// {
//   "schema": "charinv-instance/1",
//   "group": {"table": [[...]]} | {"cyclic_orders": [n1, ...]}
//          | {"semidirect": {"normal": <group>, "quotient": <group>, "action": [[...], ...]}},
//   "subgroup": [ids],                          default: the whole group
//   "K": [n1, ...],                             default: trivial
//   "kappa": [[{"num": a, "den": b}, ...], ...] generator values, default trivial
//   "nu": [{"h": id, "k": [tuple]}, ...]        unlisted members map to 0
//   "extension": [[tuple], ...]                 optional hom G -> K, one tuple per element
//   "pair": {"modulus": M, "lambda": [[...]], "mu": [[...]]}   exponents over M
//   "cocycle": {"modulus": M, "values": [[...]]}                a 2-cocycle on K
// }

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "charinv/abelian.hpp"
#include "charinv/error.hpp"
#include "charinv/group.hpp"
#include "charinv/nu_extend.hpp"
#include "charinv/phase.hpp"

namespace charinv::io {

using nlohmann::json;

inline constexpr const char* kSchema = "charinv-instance/1";

/// Schema-checked but not yet validated instance data.
struct RawInstance {
  json group;
  std::optional<std::vector<Element>> subgroup;
  std::vector<std::int64_t> k;
  std::optional<std::vector<std::vector<Phase>>> kappa;
  std::vector<std::pair<Element, Tuple>> nu;
  std::optional<std::vector<Tuple>> extension;
  struct Tables {
    std::int64_t modulus;
    std::vector<std::vector<std::int64_t>> a, b;
  };
  std::optional<Tables> pair;
  std::optional<Tables> cocycle;  // b unused
};

namespace detail {

[[noreturn]] inline void fail(const std::string& field, const std::string& what) {
  throw Error(Errc::ParseError, "field '" + field + "': " + what);
}

inline std::int64_t get_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<std::int64_t>();
}

inline std::size_t get_index(const json& j, const std::string& field) {
  const std::int64_t v = get_int(j, field);
  if (v < 0) fail(field, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

template <class Get>
auto get_array(const json& j, const std::string& field, Get&& get) {
  if (!j.is_array()) fail(field, "expected an array");
  std::vector<decltype(get(j, field))> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get(j[i], field + "/" + std::to_string(i)));
  return out;
}

inline std::vector<std::int64_t> get_ints(const json& j, const std::string& field) {
  return get_array(j, field, get_int);
}

inline std::vector<std::vector<std::int64_t>> get_int_matrix(const json& j, const std::string& field) {
  return get_array(j, field, get_ints);
}

inline Phase get_phase(const json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den")) fail(field, "expected {\"num\", \"den\"}");
  const std::int64_t den = get_int(j["den"], field + "/den");
  if (den <= 0) fail(field + "/den", "denominator must be positive");
  return Phase(get_int(j["num"], field + "/num"), den);
}

inline RawInstance::Tables get_tables(const json& j, const std::string& field, const char* a, const char* b) {
  if (!j.is_object()) fail(field, "expected an object");
  RawInstance::Tables t;
  if (!j.contains("modulus")) fail(field, "missing 'modulus'");
  t.modulus = get_int(j["modulus"], field + "/modulus");
  if (t.modulus <= 0) fail(field + "/modulus", "must be positive");
  if (!j.contains(a)) fail(field, std::string("missing '") + a + "'");
  t.a = get_int_matrix(j[a], field + "/" + a);
  if (b) {
    if (!j.contains(b)) fail(field, std::string("missing '") + b + "'");
    t.b = get_int_matrix(j[b], field + "/" + b);
  }
  return t;
}

}  // namespace detail

inline RawInstance parse_instance(const json& j) {
  using namespace detail;
  if (!j.is_object()) fail("(root)", "expected an object");
  if (!j.contains("schema") || j["schema"] != kSchema) fail("schema", std::string("expected \"") + kSchema + "\"");
  RawInstance r;
  if (!j.contains("group")) fail("group", "missing");
  r.group = j["group"];
  if (j.contains("subgroup"))
    r.subgroup = get_array(j["subgroup"], "subgroup", get_index);
  if (j.contains("K")) r.k = get_ints(j["K"], "K");
  if (j.contains("kappa"))
    r.kappa = get_array(j["kappa"], "kappa", [](const json& row, const std::string& f) {
      return get_array(row, f, get_phase);
    });
  if (j.contains("nu")) {
    const json& nu = j["nu"];
    if (!nu.is_array()) fail("nu", "expected an array");
    for (std::size_t i = 0; i < nu.size(); ++i) {
      const std::string f = "nu/" + std::to_string(i);
      if (!nu[i].is_object() || !nu[i].contains("h") || !nu[i].contains("k")) fail(f, "expected {\"h\", \"k\"}");
      r.nu.emplace_back(get_index(nu[i]["h"], f + "/h"), get_ints(nu[i]["k"], f + "/k"));
    }
  }
  if (j.contains("extension")) r.extension = get_int_matrix(j["extension"], "extension");
  if (j.contains("pair")) r.pair = get_tables(j["pair"], "pair", "lambda", "mu");
  if (j.contains("cocycle")) r.cocycle = get_tables(j["cocycle"], "cocycle", "values", nullptr);
  return r;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
}

inline RawInstance load_instance(const std::string& path) { return parse_instance(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Building validated objects

/// Builds G from a group spec; validation errors propagate unchanged.
inline FiniteGroup build_group(const json& spec, const std::string& field = "group") {
  using namespace detail;
  if (!spec.is_object()) fail(field, "expected an object");
  if (spec.contains("table")) {
    auto rows = get_int_matrix(spec["table"], field + "/table");
    Table t;
    for (auto& row : rows) {
      std::vector<Element> r;
      for (auto v : row) {
        if (v < 0) throw Error(Errc::InvalidArgument, "table entry out of range");
        r.push_back(static_cast<Element>(v));
      }
      t.push_back(std::move(r));
    }
    return validate_group(t);
  }
  if (spec.contains("cyclic_orders")) return AbelianGroup(get_ints(spec["cyclic_orders"], field + "/cyclic_orders")).as_group();
  if (spec.contains("semidirect")) {
    const json& s = spec["semidirect"];
    const std::string f = field + "/semidirect";
    if (!s.is_object() || !s.contains("normal") || !s.contains("quotient") || !s.contains("action"))
      fail(f, "expected {\"normal\", \"quotient\", \"action\"}");
    const FiniteGroup h = build_group(s["normal"], f + "/normal");
    const FiniteGroup q = build_group(s["quotient"], f + "/quotient");
    auto raw = get_array(s["action"], f + "/action", [](const json& row, const std::string& ff) {
      return get_array(row, ff, get_index);
    });
    return semidirect_product(h, q, raw);
  }
  fail(field, "expected one of 'table', 'cyclic_orders', 'semidirect'");
}

inline Subgroup build_subgroup(const RawInstance& r, const FiniteGroup& g) {
  if (!r.subgroup) return whole_group(g);
  for (Element x : *r.subgroup)
    if (x >= g.order()) throw Error(Errc::InvalidArgument, "subgroup member out of range");
  std::vector<Element> m = *r.subgroup;
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  Subgroup h = make_subgroup(g, m);
  if (!is_normal(g, h)) throw Error(Errc::NotNormal, "subgroup is not normal in G");
  return h;
}

inline Bicharacter build_kappa(const RawInstance& r, const AbelianGroup& k) {
  if (!r.kappa) return trivial_bicharacter(k);
  return bicharacter_from_generators(k, *r.kappa);
}

inline Element k_id(const AbelianGroup& k, const Tuple& t, const std::string& field) {
  if (t.size() != k.rank()) detail::fail(field, "tuple length != rank of K");
  return k.id(t);
}

inline NuMap build_nu(const RawInstance& r, const FiniteGroup& g, const Subgroup& h, const AbelianGroup& k) {
  NuMap nu{g, h, k, std::vector<Element>(h.size(), k.as_group().identity())};
  for (std::size_t i = 0; i < r.nu.size(); ++i) {
    const auto& [x, t] = r.nu[i];
    if (!h.contains(x)) throw Error(Errc::InvalidArgument, "nu lists an element outside H", {static_cast<std::int64_t>(x)});
    nu.values[h.index_of(x)] = k_id(k, t, "nu/" + std::to_string(i) + "/k");
  }
  return nu;
}

inline std::optional<GroupHom> build_extension(const RawInstance& r, const FiniteGroup& g, const AbelianGroup& k) {
  if (!r.extension) return std::nullopt;
  if (r.extension->size() != g.order()) throw Error(Errc::ShapeMismatch, "extension needs one tuple per element of G");
  std::vector<Element> img;
  for (std::size_t i = 0; i < g.order(); ++i) img.push_back(k_id(k, (*r.extension)[i], "extension/" + std::to_string(i)));
  return validate_hom(g, k.as_group(), img);
}

inline PhaseFunction build_table(const std::vector<std::vector<std::int64_t>>& rows, std::size_t nr, std::size_t nc,
                                 std::int64_t modulus, const std::string& field) {
  if (rows.size() != nr) throw Error(Errc::ShapeMismatch, field + ": expected " + std::to_string(nr) + " rows");
  PhaseFunction f({nr, nc}, modulus);
  for (std::size_t i = 0; i < nr; ++i) {
    if (rows[i].size() != nc)
      throw Error(Errc::ShapeMismatch, field + ": expected " + std::to_string(nc) + " columns");
    for (std::size_t j = 0; j < nc; ++j) f.set_exponent(i, j, rows[i][j]);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Serialization

inline json phase_json(const Phase& p) {
  const Phase r = p.reduced();
  return {{"num", r.exponent()}, {"den", r.modulus()}};
}

inline json table_json(const PhaseFunction& f) {
  json rows = json::array();
  const auto& s = f.shape();
  if (s.size() == 1) {
    for (std::size_t i = 0; i < s[0]; ++i) rows.push_back(f.exponent(i));
    return rows;
  }
  for (std::size_t i = 0; i < s[0]; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < s[1]; ++j) row.push_back(f.exponent(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json tuple_json(const AbelianGroup& k, Element x) { return k.tuple(x); }

inline json hom_json(const GroupHom& f, const AbelianGroup& k) {
  json out = json::array();
  for (Element x = 0; x < f.source().order(); ++x) out.push_back(tuple_json(k, f(x)));
  return out;
}

inline json error_json(const Error& e) {
  return {{"code", std::string(errc_name(e.code()))}, {"message", e.what()}, {"witness", e.witness()}};
}

}  // namespace charinv::io
