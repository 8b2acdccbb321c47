#pragma once

// κ-twisted characteristic pairs (λ, μ) for a normal subgroup H ⊂ G, a
// bicharacter κ on K and an equivariant ν: H → K.
//
// All relations are checked on exponents over one common modulus L:
//   (1) μ(h,k)μ(hk,l) = μ(k,l)μ(h,kl)
//   (2) λ(g₁g₂,h) = λ(g₁,h)λ(g₂,g₁⁻¹hg₁)
//   (3) λ(g,hk)·conj(λ(g,h)λ(g,k)) = μ(h,k)·conj(μ(g⁻¹hg,g⁻¹kg))
//   (4) λ(h,k) = μ(h,h⁻¹kh)·conj(μ(k,h)κ(ν(k),ν(h)))
//   (5) λ(e,h) = λ(g,e) = μ(e,k) = μ(h,e) = 1
// Pairs are equivalent when v_h ↦ c(h)v_h carries one to the other:
//   λ'(g,h) = λ(g,h)c(g⁻¹hg)conj(c(h)),  μ'(h,k) = μ(h,k)c(h)c(k)conj(c(hk)).

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "charinv/abelian.hpp"
#include "charinv/error.hpp"
#include "charinv/group.hpp"
#include "charinv/linear_mod.hpp"
#include "charinv/nu_extend.hpp"
#include "charinv/parallel.hpp"
#include "charinv/phase.hpp"

namespace charinv {

struct PairContext {
  NuInvariant nu;
  Bicharacter kappa;

  const FiniteGroup& group() const noexcept { return nu.group(); }
  const Subgroup& subgroup() const noexcept { return nu.subgroup(); }
  const AbelianGroup& target() const noexcept { return nu.target(); }

  /// κ(ν(a), ν(b)) for a, b ∈ H.
  Phase kappa_nu(Element a, Element b) const { return kappa(nu(a), nu(b)); }
};

using ContextPtr = std::shared_ptr<const PairContext>;

inline ContextPtr make_context(NuInvariant nu, Bicharacter kappa) {
  if (!(kappa.group() == nu.target()))
    throw Error(Errc::ContextMismatch, "kappa and nu live on different groups K");
  return std::make_shared<const PairContext>(PairContext{std::move(nu), std::move(kappa)});
}

/// Same G, H, K, ν with κ replaced by the trivial bicharacter.
inline ContextPtr classical_context(const PairContext& ctx) {
  return make_context(ctx.nu, trivial_bicharacter(ctx.target()));
}

inline bool same_context(const PairContext& a, const PairContext& b) {
  return a.group() == b.group() && a.nu == b.nu && a.kappa == b.kappa;
}

// ---------------------------------------------------------------------------

struct RelationFailure {
  int relation;                  // 1..5
  std::vector<Element> witness;  // group elements, or ("lambda"/"mu" slot) for (5)
  std::string detail;
};

struct PairReport {
  std::vector<RelationFailure> failures;  // at most one per relation, in order
  bool ok() const noexcept { return failures.empty(); }

  static constexpr const char* kRelation3Reading =
      "relation 3 compares lambda(g,hk) with lambda(g,h)lambda(g,k); the third factor is "
      "lambda(g,k)";
};

namespace detail {

struct PairExponents {
  const PairContext& ctx;
  std::int64_t modulus;
  std::int64_t lam_scale, mu_scale;
  const PhaseFunction& lam;
  const PhaseFunction& mu;

  std::int64_t l(Element g, Element h) const {
    return lam.exponent(g, ctx.subgroup().index_of(h)) * lam_scale;
  }
  std::int64_t m(Element h, Element k) const {
    const auto& s = ctx.subgroup();
    return mu.exponent(s.index_of(h), s.index_of(k)) * mu_scale;
  }
  std::int64_t kap(Element a, Element b) const { return ctx.kappa_nu(a, b).rescaled(modulus).exponent(); }
  bool zero(std::int64_t v) const { return mod_floor(v, modulus) == 0; }
};

inline void check_pair_shapes(const PairContext& ctx, const PhaseFunction& lambda, const PhaseFunction& mu) {
  const std::size_t ng = ctx.group().order(), nh = ctx.subgroup().size();
  if (lambda.shape() != std::vector<std::size_t>{ng, nh})
    throw Error(Errc::ShapeMismatch, "lambda must be a |G|x|H| table");
  if (mu.shape() != std::vector<std::size_t>{nh, nh}) throw Error(Errc::ShapeMismatch, "mu must be a |H|x|H| table");
  if (lambda.modulus() != mu.modulus()) throw Error(Errc::ShapeMismatch, "lambda and mu must share one modulus");
}

}  // namespace detail

/// Evaluates relations (1)–(5), recording the first witness of each failure.
inline PairReport check_pair(const PairContext& ctx, const PhaseFunction& lambda, const PhaseFunction& mu) {
  detail::check_pair_shapes(ctx, lambda, mu);
  const FiniteGroup& g = ctx.group();
  const Subgroup& h = ctx.subgroup();
  const std::int64_t big = checked_lcm(lambda.modulus(), ctx.kappa.modulus(), kDefaultModulusCap);
  detail::PairExponents x{ctx, big, big / lambda.modulus(), big / mu.modulus(), lambda, mu};
  PairReport rep;
  const Element e = g.identity();

  auto first = [&](int rel) {
    return std::none_of(rep.failures.begin(), rep.failures.end(),
                        [rel](const RelationFailure& f) { return f.relation == rel; });
  };

  for (Element a : h.members())
    for (Element b : h.members())
      for (Element c : h.members())
        if (first(1) && !x.zero(x.m(a, b) + x.m(g.mul(a, b), c) - x.m(b, c) - x.m(a, g.mul(b, c))))
          rep.failures.push_back({1, {a, b, c}, "mu(h,k)mu(hk,l) != mu(k,l)mu(h,kl)"});

  for (Element g1 = 0; g1 < g.order(); ++g1)
    for (Element g2 = 0; g2 < g.order(); ++g2)
      for (Element a : h.members())
        if (first(2) && !x.zero(x.l(g.mul(g1, g2), a) - x.l(g1, a) - x.l(g2, g.conj(g1, a))))
          rep.failures.push_back({2, {g1, g2, a}, "lambda(g1g2,h) != lambda(g1,h)lambda(g2,g1^-1 h g1)"});

  for (Element s = 0; s < g.order(); ++s)
    for (Element a : h.members())
      for (Element b : h.members())
        if (first(3) && !x.zero(x.l(s, g.mul(a, b)) - x.l(s, a) - x.l(s, b) - x.m(a, b) +
                                x.m(g.conj(s, a), g.conj(s, b))))
          rep.failures.push_back(
              {3, {s, a, b}, "lambda(g,hk)conj(lambda(g,h)lambda(g,k)) != mu(h,k)conj(mu(g^-1hg,g^-1kg))"});

  for (Element a : h.members())
    for (Element b : h.members())
      if (first(4) && !x.zero(x.l(a, b) - x.m(a, g.conj(a, b)) + x.m(b, a) + x.kap(b, a)))
        rep.failures.push_back({4, {a, b}, "lambda(h,k) != mu(h,h^-1kh)conj(mu(k,h)kappa(nu(k),nu(h)))"});

  for (Element a : h.members())
    if (first(5) && !x.zero(x.l(e, a))) rep.failures.push_back({5, {e, a}, "lambda(e,h) != 1"});
  for (Element s = 0; s < g.order(); ++s)
    if (first(5) && !x.zero(x.l(s, e))) rep.failures.push_back({5, {s, e}, "lambda(g,e) != 1"});
  for (Element a : h.members()) {
    if (first(5) && !x.zero(x.m(e, a))) rep.failures.push_back({5, {e, a}, "mu(e,k) != 1"});
    if (first(5) && !x.zero(x.m(a, e))) rep.failures.push_back({5, {a, e}, "mu(h,e) != 1"});
  }
  std::stable_sort(rep.failures.begin(), rep.failures.end(),
                   [](const RelationFailure& p, const RelationFailure& q) { return p.relation < q.relation; });
  return rep;
}

class CharacteristicPair;
CharacteristicPair validate_pair(ContextPtr ctx, PhaseFunction lambda, PhaseFunction mu);

class CharacteristicPair {
 public:
  const PairContext& context() const noexcept { return *ctx_; }
  const ContextPtr& context_ptr() const noexcept { return ctx_; }
  const PhaseFunction& lambda() const noexcept { return lambda_; }
  const PhaseFunction& mu() const noexcept { return mu_; }
  std::int64_t modulus() const noexcept { return lambda_.modulus(); }

  /// λ(g, h), h ∈ H given as an element of G.
  Phase lambda(Element g, Element h) const { return lambda_.at(g, ctx_->subgroup().index_of(h)); }
  Phase mu(Element h, Element k) const {
    const auto& s = ctx_->subgroup();
    return mu_.at(s.index_of(h), s.index_of(k));
  }

  /// λ then μ exponents, row-major; the order used for canonical choices.
  std::vector<std::int64_t> key() const {
    std::vector<std::int64_t> k(lambda_.exponents().begin(), lambda_.exponents().end());
    k.insert(k.end(), mu_.exponents().begin(), mu_.exponents().end());
    return k;
  }

  /// Same tables, same context (value equality of phases).
  friend bool operator==(const CharacteristicPair& a, const CharacteristicPair& b) {
    return same_context(*a.ctx_, *b.ctx_) && a.lambda_ == b.lambda_ && a.mu_ == b.mu_;
  }

 private:
  CharacteristicPair(ContextPtr c, PhaseFunction l, PhaseFunction m)
      : ctx_(std::move(c)), lambda_(std::move(l)), mu_(std::move(m)) {}
  ContextPtr ctx_;
  PhaseFunction lambda_;
  PhaseFunction mu_;
  friend CharacteristicPair validate_pair(ContextPtr ctx, PhaseFunction lambda, PhaseFunction mu);
};

/// Throws RelationFails naming the lowest failing relation; the witness is
/// (relation, elements...).
inline CharacteristicPair validate_pair(ContextPtr ctx, PhaseFunction lambda, PhaseFunction mu) {
  const PairReport rep = check_pair(*ctx, lambda, mu);
  if (!rep.ok()) {
    const auto& f = rep.failures.front();
    std::vector<std::int64_t> w{f.relation};
    for (Element x : f.witness) w.push_back(static_cast<std::int64_t>(x));
    throw Error(Errc::RelationFails, "relation (" + std::to_string(f.relation) + "): " + f.detail, std::move(w));
  }
  return CharacteristicPair(std::move(ctx), std::move(lambda), std::move(mu));
}

inline CharacteristicPair trivial_pair(ContextPtr ctx, std::int64_t modulus = 1) {
  const std::size_t ng = ctx->group().order(), nh = ctx->subgroup().size();
  return validate_pair(ctx, PhaseFunction({ng, nh}, modulus), PhaseFunction({nh, nh}, modulus));
}

inline CharacteristicPair rescaled(const CharacteristicPair& p, std::int64_t modulus) {
  return validate_pair(p.context_ptr(), p.lambda().rescaled(modulus), p.mu().rescaled(modulus));
}

// ---------------------------------------------------------------------------
// c-perturbation and equivalence

namespace detail {

/// δ(c) applied to flat (λ, μ) exponent keys over modulus m.
struct Perturber {
  const FiniteGroup& g;
  const Subgroup& h;
  std::int64_t m;

  void apply(std::vector<std::int64_t>& key, const std::vector<std::int64_t>& c) const {
    const std::size_t nh = h.size(), ng = g.order();
    for (Element s = 0; s < ng; ++s)
      for (std::size_t j = 0; j < nh; ++j) {
        const Element x = h.at(j);
        auto& v = key[s * nh + j];
        v = mod_floor(v + c[h.index_of(g.conj(s, x))] - c[j], m);
      }
    const std::size_t off = ng * nh;
    for (std::size_t i = 0; i < nh; ++i)
      for (std::size_t j = 0; j < nh; ++j) {
        auto& v = key[off + i * nh + j];
        v = mod_floor(v + c[i] + c[j] - c[h.index_of(g.mul(h.at(i), h.at(j)))], m);
      }
  }

  std::uint64_t cochain_count(const EnumOptions& opts) const {
    std::uint64_t n = 1;
    for (std::size_t i = 1; i < h.size(); ++i) {
      n *= static_cast<std::uint64_t>(m);
      if (n > opts.max_enum)
        throw Error(Errc::EnumerationCapExceeded, "perturbation search space " + std::to_string(m) + "^" +
                                                      std::to_string(h.size() - 1) + " exceeds --max-enum");
    }
    return n;
  }

  /// The index-th normalized c (c(e) = 0), mixed radix over non-identity slots.
  std::vector<std::int64_t> cochain(std::uint64_t index) const {
    std::vector<std::int64_t> c(h.size(), 0);
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (h.at(j) == g.identity()) continue;
      c[j] = static_cast<std::int64_t>(index % static_cast<std::uint64_t>(m));
      index /= static_cast<std::uint64_t>(m);
    }
    return c;
  }
};

inline std::vector<std::int64_t> key_at(const PhaseFunction& lam, const PhaseFunction& mu, std::int64_t m) {
  std::vector<std::int64_t> k;
  for (std::size_t i = 0; i < lam.size(); ++i) k.push_back(lam.at(i).rescaled(m).exponent());
  for (std::size_t i = 0; i < mu.size(); ++i) k.push_back(mu.at(i).rescaled(m).exponent());
  return k;
}

struct TableEquivalence {
  bool equivalent = false;
  std::vector<std::int64_t> c;  // indexed by H position, over the search modulus
};

/// Backtracking search for c with q = p·δ(c); constraints are checked as
/// soon as all their unknowns are assigned.
inline TableEquivalence table_equivalence(const FiniteGroup& g, const Subgroup& h,
                                          const std::vector<std::int64_t>& p,
                                          const std::vector<std::int64_t>& q, std::int64_t m,
                                          const EnumOptions& opts) {
  const std::size_t nh = h.size(), ng = g.order();
  Perturber pert{g, h, m};
  pert.cochain_count(opts);

  std::vector<std::size_t> order;  // H positions of the unknowns
  std::vector<std::size_t> rank(nh, 0);
  for (std::size_t j = 0; j < nh; ++j)
    if (h.at(j) != g.identity()) {
      rank[j] = order.size() + 1;
      order.push_back(j);
    }
  struct Constraint {
    std::vector<std::pair<std::size_t, std::int64_t>> terms;  // (H position, coefficient)
    std::int64_t target;
  };
  std::vector<std::vector<Constraint>> ready(order.size() + 1);
  auto add = [&](Constraint c) {
    std::size_t at = 0;
    for (auto& [pos, coef] : c.terms) at = std::max(at, rank[pos]);
    ready[at].push_back(std::move(c));
  };
  for (Element s = 0; s < ng; ++s)
    for (std::size_t j = 0; j < nh; ++j) {
      const std::size_t idx = s * nh + j;
      add({{{h.index_of(g.conj(s, h.at(j))), 1}, {j, -1}}, mod_floor(q[idx] - p[idx], m)});
    }
  const std::size_t off = ng * nh;
  for (std::size_t i = 0; i < nh; ++i)
    for (std::size_t j = 0; j < nh; ++j) {
      const std::size_t idx = off + i * nh + j;
      add({{{i, 1}, {j, 1}, {h.index_of(g.mul(h.at(i), h.at(j))), -1}}, mod_floor(q[idx] - p[idx], m)});
    }

  std::vector<std::int64_t> c(nh, 0);
  auto holds = [&](std::size_t level) {
    for (auto& con : ready[level]) {
      std::int64_t v = 0;
      for (auto& [pos, coef] : con.terms) v += coef * c[pos];
      if (mod_floor(v - con.target, m) != 0) return false;
    }
    return true;
  };
  if (!holds(0)) return {};
  // iterative DFS
  std::size_t depth = 0;
  std::vector<std::int64_t> next(order.size(), 0);
  while (true) {
    if (depth == order.size()) return {true, c};
    if (next[depth] == m) {
      next[depth] = 0;
      c[order[depth]] = 0;
      if (depth == 0) return {};
      --depth;
      continue;
    }
    c[order[depth]] = next[depth]++;
    if (holds(depth + 1)) ++depth;
  }
}

}  // namespace detail

/// p perturbed by a normalized c: H → phases.
inline CharacteristicPair perturb(const CharacteristicPair& p, const PhaseFunction& c) {
  const auto& ctx = p.context();
  if (c.shape() != std::vector<std::size_t>{ctx.subgroup().size()})
    throw Error(Errc::ShapeMismatch, "c must be indexed by H");
  if (!c.at(ctx.subgroup().index_of(ctx.group().identity())).is_one())
    throw Error(Errc::NotNormalized, "c(e) != 1");
  const std::int64_t m = checked_lcm(p.modulus(), c.modulus(), kDefaultModulusCap);
  auto key = detail::key_at(p.lambda(), p.mu(), m);
  std::vector<std::int64_t> cv;
  for (std::size_t i = 0; i < c.size(); ++i) cv.push_back(c.at(i).rescaled(m).exponent());
  detail::Perturber{ctx.group(), ctx.subgroup(), m}.apply(key, cv);
  const std::size_t nl = p.lambda().size();
  return validate_pair(
      p.context_ptr(),
      PhaseFunction::from_exponents(p.lambda().shape(), m, {key.begin(), key.begin() + static_cast<std::ptrdiff_t>(nl)}),
      PhaseFunction::from_exponents(p.mu().shape(), m, {key.begin() + static_cast<std::ptrdiff_t>(nl), key.end()}));
}

struct Equivalence {
  bool equivalent = false;
  std::optional<PhaseFunction> witness;  // c over H positions
};

/// Decides p ~ q by exhaustive pruned search over c at lcm of the moduli.
inline Equivalence equivalent(const CharacteristicPair& p, const CharacteristicPair& q,
                              const EnumOptions& opts = {}) {
  if (!same_context(p.context(), q.context()))
    throw Error(Errc::ContextMismatch, "pairs live in different contexts");
  const std::int64_t m = checked_lcm(p.modulus(), q.modulus(), kDefaultModulusCap);
  const auto& ctx = p.context();
  auto r = detail::table_equivalence(ctx.group(), ctx.subgroup(), detail::key_at(p.lambda(), p.mu(), m),
                                     detail::key_at(q.lambda(), q.mu(), m), m, opts);
  if (!r.equivalent) return {};
  return {true, PhaseFunction::from_exponents({ctx.subgroup().size()}, m, r.c)};
}

/// Lexicographically least pair (by key) in the class of p, at p's modulus.
inline CharacteristicPair canonical(const CharacteristicPair& p, const EnumOptions& opts = {}) {
  const auto& ctx = p.context();
  detail::Perturber pert{ctx.group(), ctx.subgroup(), p.modulus()};
  const std::uint64_t n = pert.cochain_count(opts);
  const auto base = p.key();
  auto best = base;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto k = base;
    pert.apply(k, pert.cochain(i));
    if (k < best) best = std::move(k);
  }
  const std::size_t nl = p.lambda().size();
  return validate_pair(p.context_ptr(),
                       PhaseFunction::from_exponents(p.lambda().shape(), p.modulus(),
                                                     {best.begin(), best.begin() + static_cast<std::ptrdiff_t>(nl)}),
                       PhaseFunction::from_exponents(p.mu().shape(), p.modulus(),
                                                     {best.begin() + static_cast<std::ptrdiff_t>(nl), best.end()}));
}

// ---------------------------------------------------------------------------
// Λ(G, H | κ)

struct LambdaClass {
  CharacteristicPair representative;  // lexicographically least in its class
  std::uint64_t size;                 // number of pairs at the working modulus
};

namespace detail {

/// Linear system whose solutions are the valid pairs at modulus m, in the
/// unknowns λ(g,h) (g,h ≠ e) and μ(h,k) (h,k ≠ e). Returns nullopt when a
/// κ value needed by relation (4) is not an m-th root of unity.
struct PairSystem {
  IntMatrix a;
  std::vector<std::int64_t> rhs;
  std::vector<std::size_t> slot;  // key index -> unknown, npos when normalized
  std::size_t unknowns = 0;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

inline std::optional<PairSystem> pair_system(const PairContext& ctx, std::int64_t m) {
  const FiniteGroup& g = ctx.group();
  const Subgroup& h = ctx.subgroup();
  const std::size_t ng = g.order(), nh = h.size(), off = ng * nh;
  const Element e = g.identity();
  PairSystem sys;
  sys.slot.assign(off + nh * nh, PairSystem::npos);
  for (Element s = 0; s < ng; ++s)
    for (std::size_t j = 0; j < nh; ++j)
      if (s != e && h.at(j) != e) sys.slot[s * nh + j] = sys.unknowns++;
  for (std::size_t i = 0; i < nh; ++i)
    for (std::size_t j = 0; j < nh; ++j)
      if (h.at(i) != e && h.at(j) != e) sys.slot[off + i * nh + j] = sys.unknowns++;
  sys.a = IntMatrix(0, sys.unknowns);

  auto lam = [&](Element s, Element x) { return s * nh + h.index_of(x); };
  auto mu = [&](Element x, Element y) { return off + h.index_of(x) * nh + h.index_of(y); };
  std::vector<std::pair<std::size_t, std::int64_t>> terms;
  auto emit = [&](std::int64_t rhs) {
    std::vector<std::int64_t> row(sys.unknowns, 0);
    bool any = false;
    for (auto [k, coef] : terms)
      if (sys.slot[k] != PairSystem::npos) {
        row[sys.slot[k]] += coef;
        any = true;
      }
    terms.clear();
    if (!any && mod_floor(rhs, m) == 0) return;
    const std::size_t r = sys.a.add_row();
    for (std::size_t j = 0; j < sys.unknowns; ++j) sys.a(r, j) = row[j];
    sys.rhs.push_back(rhs);
  };

  for (Element x : h.members())
    for (Element y : h.members())
      for (Element z : h.members()) {
        terms = {{mu(x, y), 1}, {mu(g.mul(x, y), z), 1}, {mu(y, z), -1}, {mu(x, g.mul(y, z)), -1}};
        emit(0);
      }
  for (Element g1 = 0; g1 < ng; ++g1)
    for (Element g2 = 0; g2 < ng; ++g2)
      for (Element x : h.members()) {
        terms = {{lam(g.mul(g1, g2), x), 1}, {lam(g1, x), -1}, {lam(g2, g.conj(g1, x)), -1}};
        emit(0);
      }
  for (Element s = 0; s < ng; ++s)
    for (Element x : h.members())
      for (Element y : h.members()) {
        terms = {{lam(s, g.mul(x, y)), 1}, {lam(s, x), -1}, {lam(s, y), -1}, {mu(x, y), -1},
                 {mu(g.conj(s, x), g.conj(s, y)), 1}};
        emit(0);
      }
  for (Element x : h.members())
    for (Element y : h.members()) {
      const Phase k = ctx.kappa_nu(y, x);
      if (!k.representable_at(m)) return std::nullopt;
      terms = {{lam(x, y), 1}, {mu(x, g.conj(x, y)), -1}, {mu(y, x), 1}};
      emit(-k.rescaled(m).exponent());
    }
  return sys;
}

}  // namespace detail

/// Every valid pair at `modulus`, partitioned into c-perturbation classes.
/// The coset of each new representative is generated on `opts.jobs` threads;
/// output does not depend on the thread count.
inline std::vector<LambdaClass> enumerate_lambda_group(const ContextPtr& ctx, std::int64_t modulus,
                                                       const EnumOptions& opts = {}) {
  const FiniteGroup& g = ctx->group();
  const Subgroup& h = ctx->subgroup();
  const std::size_t ng = g.order(), nh = h.size(), nl = ng * nh;
  auto sys = detail::pair_system(*ctx, modulus);
  if (!sys) return {};
  auto space = solution_space(sys->a, sys->rhs, modulus);
  if (!space) return {};
  if (space->size() > opts.max_enum)
    throw Error(Errc::EnumerationCapExceeded,
                "valid pair count " + std::to_string(space->size()) + " exceeds --max-enum");
  detail::Perturber pert{g, h, modulus};
  const std::uint64_t ncochains = pert.cochain_count(opts);

  std::vector<std::vector<std::int64_t>> keys;
  keys.reserve(space->size());
  space->for_each([&](std::span<const std::int64_t> x) {
    std::vector<std::int64_t> k(sys->slot.size(), 0);
    for (std::size_t i = 0; i < k.size(); ++i)
      if (sys->slot[i] != detail::PairSystem::npos) k[i] = x[sys->slot[i]];
    keys.push_back(std::move(k));
  });
  std::sort(keys.begin(), keys.end());

  std::vector<char> seen(keys.size(), 0);
  std::vector<LambdaClass> out;
  std::vector<std::size_t> hit(ncochains);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (seen[i]) continue;
    parallel_for(ncochains, opts.jobs, [&](std::size_t begin, std::size_t end) {
      for (std::size_t c = begin; c < end; ++c) {
        auto k = keys[i];
        pert.apply(k, pert.cochain(c));
        auto it = std::lower_bound(keys.begin(), keys.end(), k);
        if (it == keys.end() || *it != k)
          throw Error(Errc::InvalidArgument, "internal: perturbation left the set of valid pairs");
        hit[c] = static_cast<std::size_t>(it - keys.begin());
      }
    });
    std::uint64_t size = 0;
    for (std::size_t c = 0; c < ncochains; ++c)
      if (!seen[hit[c]]) {
        seen[hit[c]] = 1;
        ++size;
      }
    const auto& k = keys[i];
    out.push_back({validate_pair(ctx,
                                 PhaseFunction::from_exponents({ng, nh}, modulus, {k.begin(), k.begin() + static_cast<std::ptrdiff_t>(nl)}),
                                 PhaseFunction::from_exponents({nh, nh}, modulus, {k.begin() + static_cast<std::ptrdiff_t>(nl), k.end()})),
                   size});
  }
  return out;
}

// ---------------------------------------------------------------------------
// κ-untwisting and the bar transformation

namespace detail {

inline void check_extension(const PairContext& ctx, const GroupHom& ext) {
  if (!restricts_to(ext, ctx.nu.map()))
    throw Error(Errc::NotAnExtension, "hom G -> K does not restrict to nu on H");
}

/// λ(g,n)·f(g,n), μ(m,n)·k(m,n) over lcm(pair modulus, κ modulus).
template <class LamFactor, class MuFactor>
CharacteristicPair scale_pair(const CharacteristicPair& p, ContextPtr target, LamFactor&& lf, MuFactor&& mf) {
  const auto& ctx = p.context();
  const FiniteGroup& g = ctx.group();
  const Subgroup& h = ctx.subgroup();
  const std::int64_t m = checked_lcm(p.modulus(), ctx.kappa.modulus(), kDefaultModulusCap);
  PhaseFunction lam({g.order(), h.size()}, m), mu({h.size(), h.size()}, m);
  for (Element s = 0; s < g.order(); ++s)
    for (std::size_t j = 0; j < h.size(); ++j) lam.set(s, j, phase_mul(lf(s, h.at(j)), p.lambda().at(s, j)));
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) mu.set(i, j, phase_mul(mf(h.at(i), h.at(j)), p.mu().at(i, j)));
  return validate_pair(std::move(target), std::move(lam), std::move(mu));
}

}  // namespace detail

/// λ′(g,n) = κ(ν(n), ν̃(g))·λ(g,n), μ unchanged; the result lives in the
/// trivial-κ context.
inline CharacteristicPair untwist(const CharacteristicPair& p, const GroupHom& extension) {
  const auto& ctx = p.context();
  detail::check_extension(ctx, extension);
  return detail::scale_pair(
      p, classical_context(ctx), [&](Element g, Element n) { return ctx.kappa(ctx.nu(n), extension(g)); },
      [](Element, Element) { return Phase{}; });
}

/// untwist with the extension found by decide_extension; NotExtendable when
/// ν does not extend.
inline CharacteristicPair untwist(const CharacteristicPair& p) {
  auto cert = decide_extension(p.context().nu);
  if (!cert.extends)
    throw Error(Errc::NotExtendable, "nu does not extend to G: " + cert.obstruction.detail);
  return untwist(p, *cert.witness);
}

/// Inverse of untwist: carries a classical pair into the κ-twisted context.
inline CharacteristicPair twist(const CharacteristicPair& classical, const ContextPtr& twisted,
                                const GroupHom& extension) {
  const auto& c = classical.context();
  if (!c.kappa.is_trivial() || !(c.group() == twisted->group()) || !(c.nu == twisted->nu))
    throw Error(Errc::ContextMismatch, "twist expects a classical pair over the same G, H, nu");
  detail::check_extension(*twisted, extension);
  auto lifted = detail::scale_pair(
      classical, twisted,
      [&](Element g, Element n) { return phase_conj(twisted->kappa(twisted->nu(n), extension(g))); },
      [](Element, Element) { return Phase{}; });
  const std::int64_t m = checked_lcm(lifted.modulus(), twisted->kappa.modulus(), kDefaultModulusCap);
  return lifted.modulus() == m ? lifted : rescaled(lifted, m);
}

/// λ̄(g,n) = κ(ν̃(g), ν(n))·λ(g,n), μ̄(m,n) = κ(ν(m), ν(n))·μ(m,n); the
/// result is validated in the trivial-κ context.
inline CharacteristicPair bar_transform(const CharacteristicPair& p, const GroupHom& extension) {
  const auto& ctx = p.context();
  detail::check_extension(ctx, extension);
  return detail::scale_pair(
      p, classical_context(ctx), [&](Element g, Element n) { return ctx.kappa(extension(g), ctx.nu(n)); },
      [&](Element a, Element b) { return ctx.kappa_nu(a, b); });
}

// ---------------------------------------------------------------------------
// Invariant triples

struct InvariantTriple {
  Subgroup subgroup;
  CharacteristicPair pair;  // canonical representative
  NuInvariant nu;
};

inline InvariantTriple make_triple(const CharacteristicPair& p, const EnumOptions& opts = {}) {
  return {p.context().subgroup(), canonical(p, opts), p.context().nu};
}

enum class Component { None, Subgroup, Lambda, Nu };

inline const char* component_name(Component c) {
  switch (c) {
    case Component::None: return "none";
    case Component::Subgroup: return "H";
    case Component::Lambda: return "Lambda";
    case Component::Nu: return "nu";
  }
  return "?";
}

struct ClassifyVerdict {
  bool same = false;
  Component differing = Component::None;
  std::optional<PhaseFunction> witness;  // c relating the pairs when Λ agrees
  ExtensionCertificate extension;        // decide_extension on a's ν
  bool hypothesis_certified() const noexcept { return extension.extends; }
};

/// Compares (H, Λ, ν) in that order. Equal invariants together with a
/// certified extension of ν give stable conjugacy of the underlying actions.
inline ClassifyVerdict classify(const InvariantTriple& a, const InvariantTriple& b, const EnumOptions& opts = {}) {
  const auto& ca = a.pair.context();
  const auto& cb = b.pair.context();
  if (!(ca.group() == cb.group()) || !(ca.target() == cb.target()) || !(ca.kappa == cb.kappa))
    throw Error(Errc::ContextMismatch, "triples must share G, K and kappa");
  ClassifyVerdict v;
  v.extension = decide_extension(a.nu);
  if (!(a.subgroup == b.subgroup)) {
    v.differing = Component::Subgroup;
    return v;
  }
  const std::int64_t m = checked_lcm(a.pair.modulus(), b.pair.modulus(), kDefaultModulusCap);
  auto eq = detail::table_equivalence(ca.group(), a.subgroup, detail::key_at(a.pair.lambda(), a.pair.mu(), m),
                                      detail::key_at(b.pair.lambda(), b.pair.mu(), m), m, opts);
  if (!eq.equivalent) {
    v.differing = Component::Lambda;
    return v;
  }
  v.witness = PhaseFunction::from_exponents({a.subgroup.size()}, m, eq.c);
  if (!(a.nu == b.nu)) {
    v.differing = Component::Nu;
    return v;
  }
  v.same = true;
  return v;
}

}  // namespace charinv
