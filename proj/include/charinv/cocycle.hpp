#pragma once

// Normalized 2-cocycles with values in roots of unity, coboundaries, and the
// algebra of re-lifting: antisymmetrization, κ-twisting, and explicit
// coboundary witnesses for symmetric cocycles on abelian groups.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "charinv/abelian.hpp"
#include "charinv/error.hpp"
#include "charinv/group.hpp"
#include "charinv/linear_mod.hpp"
#include "charinv/phase.hpp"

namespace charinv {

class TwoCocycle;
TwoCocycle validate_2cocycle(const FiniteGroup& g, const PhaseFunction& values);

class TwoCocycle {
 public:
  const FiniteGroup& group() const noexcept { return g_; }
  const PhaseFunction& values() const noexcept { return values_; }
  std::int64_t modulus() const noexcept { return values_.modulus(); }
  Phase operator()(Element h, Element k) const { return values_.at(h, k); }

  bool is_symmetric() const {
    for (Element h = 0; h < g_.order(); ++h)
      for (Element k = h + 1; k < g_.order(); ++k)
        if (values_.exponent(h, k) != values_.exponent(k, h)) return false;
    return true;
  }

  friend bool operator==(const TwoCocycle& a, const TwoCocycle& b) {
    return a.g_ == b.g_ && a.values_ == b.values_;
  }

 private:
  TwoCocycle(FiniteGroup g, PhaseFunction v) : g_(std::move(g)), values_(std::move(v)) {}
  FiniteGroup g_;
  PhaseFunction values_;
  friend TwoCocycle validate_2cocycle(const FiniteGroup& g, const PhaseFunction& values);
};

inline TwoCocycle validate_2cocycle(const FiniteGroup& g, const PhaseFunction& values) {
  const std::size_t n = g.order();
  if (values.shape() != std::vector<std::size_t>{n, n})
    throw Error(Errc::ShapeMismatch, "cocycle table must be |G|x|G|");
  const Element e = g.identity();
  for (Element a = 0; a < n; ++a) {
    if (values.exponent(e, a) != 0)
      throw Error(Errc::NotNormalized, "mu(e,k) != 1", {static_cast<std::int64_t>(e), static_cast<std::int64_t>(a)});
    if (values.exponent(a, e) != 0)
      throw Error(Errc::NotNormalized, "mu(h,e) != 1", {static_cast<std::int64_t>(a), static_cast<std::int64_t>(e)});
  }
  const std::int64_t m = values.modulus();
  for (Element h = 0; h < n; ++h)
    for (Element k = 0; k < n; ++k)
      for (Element l = 0; l < n; ++l) {
        const std::int64_t lhs = values.exponent(h, k) + values.exponent(g.mul(h, k), l);
        const std::int64_t rhs = values.exponent(k, l) + values.exponent(h, g.mul(k, l));
        if (mod_floor(lhs - rhs, m) != 0)
          throw Error(Errc::CocycleIdentityFails, "mu(h,k)mu(hk,l) != mu(k,l)mu(h,kl)",
                      {static_cast<std::int64_t>(h), static_cast<std::int64_t>(k),
                       static_cast<std::int64_t>(l)});
      }
  return TwoCocycle(g, values);
}

inline TwoCocycle trivial_cocycle(const FiniteGroup& g, std::int64_t modulus = 1) {
  return validate_2cocycle(g, PhaseFunction({g.order(), g.order()}, modulus));
}

/// ∂c(h,k) = c(h)·c(k)·conj(c(hk)) for a normalized c (c(e) = 1).
inline TwoCocycle coboundary(const FiniteGroup& g, const PhaseFunction& c) {
  if (c.shape() != std::vector<std::size_t>{g.order()})
    throw Error(Errc::ShapeMismatch, "c must be a function on G");
  if (c.exponent(g.identity()) != 0) throw Error(Errc::NotNormalized, "c(e) != 1");
  PhaseFunction v({g.order(), g.order()}, c.modulus());
  for (Element h = 0; h < g.order(); ++h)
    for (Element k = 0; k < g.order(); ++k)
      v.set_exponent(h, k, c.exponent(h) + c.exponent(k) - c.exponent(g.mul(h, k)));
  return validate_2cocycle(g, v);
}

namespace detail {

/// Unknown slots (h,k), h,k ≠ e, in row-major order of (h,k).
struct CocycleSlots {
  std::size_t n;
  Element e;
  std::vector<std::size_t> slot;  // n*n, npos for identity rows/cols
  std::size_t count = 0;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit CocycleSlots(const FiniteGroup& g) : n(g.order()), e(g.identity()), slot(n * n, npos) {
    for (Element h = 0; h < n; ++h)
      for (Element k = 0; k < n; ++k)
        if (h != e && k != e) slot[h * n + k] = count++;
  }
  void add(IntMatrix& a, std::size_t row, Element h, Element k, std::int64_t coef) const {
    const std::size_t s = slot[h * n + k];
    if (s != npos) a(row, s) += coef;
  }
};

/// Homogeneous system whose solutions are the normalized cocycles (and,
/// when `symmetric`, only the symmetric ones).
inline IntMatrix cocycle_system(const FiniteGroup& g, const CocycleSlots& slots, bool symmetric) {
  IntMatrix a(0, slots.count);
  const std::size_t n = g.order();
  for (Element h = 0; h < n; ++h)
    for (Element k = 0; k < n; ++k)
      for (Element l = 0; l < n; ++l) {
        if (h == slots.e || k == slots.e || l == slots.e) continue;
        const std::size_t r = a.add_row();
        slots.add(a, r, h, k, 1);
        slots.add(a, r, g.mul(h, k), l, 1);
        slots.add(a, r, k, l, -1);
        slots.add(a, r, h, g.mul(k, l), -1);
      }
  if (symmetric)
    for (Element h = 0; h < n; ++h)
      for (Element k = h + 1; k < n; ++k) {
        if (h == slots.e || k == slots.e) continue;
        const std::size_t r = a.add_row();
        slots.add(a, r, h, k, 1);
        slots.add(a, r, k, h, -1);
      }
  return a;
}

}  // namespace detail

/// All normalized 2-cocycles with values at `modulus`, sorted by exponent
/// table. Built from the solution space of the cocycle identity.
inline std::vector<TwoCocycle> enumerate_cocycles(const FiniteGroup& g, std::int64_t modulus,
                                                  bool symmetric_only = false,
                                                  const EnumOptions& opts = {}) {
  detail::CocycleSlots slots(g);
  IntMatrix a = detail::cocycle_system(g, slots, symmetric_only);
  std::vector<std::int64_t> zero(a.rows(), 0);
  auto space = solution_space(a, zero, modulus);
  if (space->size() > opts.max_enum)
    throw Error(Errc::EnumerationCapExceeded, "cocycle count " + std::to_string(space->size()) +
                                                  " exceeds --max-enum");
  std::vector<std::vector<std::int64_t>> tables;
  tables.reserve(space->size());
  const std::size_t n = g.order();
  space->for_each([&](std::span<const std::int64_t> x) {
    std::vector<std::int64_t> t(n * n, 0);
    for (std::size_t i = 0; i < n * n; ++i)
      if (slots.slot[i] != detail::CocycleSlots::npos) t[i] = x[slots.slot[i]];
    tables.push_back(std::move(t));
  });
  std::sort(tables.begin(), tables.end());
  std::vector<TwoCocycle> out;
  out.reserve(tables.size());
  for (auto& t : tables)
    out.push_back(validate_2cocycle(g, PhaseFunction::from_exponents({n, n}, modulus, std::move(t))));
  return out;
}

/// (h,k) ↦ μ(h,k)·conj(μ(k,h)), validated as a bicharacter on K.
inline Bicharacter antisymmetrize(const AbelianGroup& k, const TwoCocycle& mu) {
  if (!(mu.group() == k.as_group()))
    throw Error(Errc::ShapeMismatch, "cocycle is not defined on K = " + describe(k));
  PhaseFunction v({k.order(), k.order()}, mu.modulus());
  for (Element h = 0; h < k.order(); ++h)
    for (Element l = 0; l < k.order(); ++l)
      v.set_exponent(h, l, mu.values().exponent(h, l) - mu.values().exponent(l, h));
  return validate_bicharacter(k, v);
}

/// κ·antisymmetrize(μ): κ for the re-lifted automorphisms.
inline Bicharacter twist_kappa(const Bicharacter& kappa, const TwoCocycle& mu,
                               std::int64_t cap = kDefaultModulusCap) {
  const AbelianGroup& k = kappa.group();
  if (!(mu.group() == k.as_group())) throw Error(Errc::ShapeMismatch, "cocycle and kappa on different groups");
  const Bicharacter anti = antisymmetrize(k, mu);
  const std::int64_t m = checked_lcm(kappa.modulus(), mu.modulus(), cap);
  PhaseFunction v({k.order(), k.order()}, m);
  for (Element h = 0; h < k.order(); ++h)
    for (Element l = 0; l < k.order(); ++l) v.set(h, l, phase_mul(kappa(h, l), anti(h, l), cap));
  return validate_bicharacter(k, v);
}

struct CoboundaryWitness {
  PhaseFunction c;  // function on K, c(e) = 1
  TwoCocycle target;
  std::vector<std::int64_t> moduli_tried;
};

/// Finds c with μ = ∂c for a symmetric normalized μ on abelian K by solving
/// c(h) + c(k) − c(hk) ≡ log μ(h,k) over M·s for s = 1, 2, …, exponent(K).
inline CoboundaryWitness symmetric_witness(const AbelianGroup& k, const TwoCocycle& mu,
                                           std::int64_t cap = kDefaultModulusCap) {
  const FiniteGroup& g = k.as_group();
  if (!(mu.group() == g)) throw Error(Errc::ShapeMismatch, "cocycle is not defined on K");
  const std::size_t n = g.order();
  for (Element h = 0; h < n; ++h)
    for (Element l = h + 1; l < n; ++l)
      if (!(mu(h, l) == mu(l, h)))
        throw Error(Errc::NotSymmetric, "mu(h,k) != mu(k,h)",
                    {static_cast<std::int64_t>(h), static_cast<std::int64_t>(l)});

  // unknowns: c(h) for h = 1..n-1 (id 0 is the identity of K)
  IntMatrix a(0, n > 0 ? n - 1 : 0);
  std::vector<std::pair<Element, Element>> eqs;
  for (Element h = 1; h < n; ++h)
    for (Element l = 1; l < n; ++l) {
      const std::size_t r = a.add_row();
      a(r, h - 1) += 1;
      a(r, l - 1) += 1;
      const Element hl = g.mul(h, l);
      if (hl != 0) a(r, hl - 1) -= 1;
      eqs.emplace_back(h, l);
    }

  const std::int64_t base = mu.modulus();
  std::vector<std::int64_t> tried;
  for (std::int64_t s = 1; s <= k.exponent(); ++s) {
    const std::int64_t m = base * s;
    if (m > cap) break;
    tried.push_back(m);
    std::vector<std::int64_t> rhs;
    rhs.reserve(eqs.size());
    for (auto [h, l] : eqs) rhs.push_back(mu.values().exponent(h, l) * s);
    auto x = solve_linear_mod(a, rhs, m);
    if (!x) continue;
    PhaseFunction c({n}, m);
    for (Element h = 1; h < n; ++h) c.set_exponent(h, (*x)[h - 1]);
    if (!(coboundary(g, c).values() == mu.values()))
      throw Error(Errc::WitnessNotFound, "internal: solver output fails re-validation");
    return {c, mu, tried};
  }
  std::string report = "no witness at moduli";
  for (auto m : tried) report += " " + std::to_string(m);
  report += " for a symmetric cocycle on " + describe(k);
  throw Error(Errc::WitnessNotFound, report);
}

struct CohomologyReport {
  std::int64_t modulus;
  std::uint64_t cocycle_count;
  std::uint64_t coboundary_count;
  std::vector<TwoCocycle> representatives;  // lexicographically least per class
};

/// One representative per class of Z²/B² with both taken at `modulus`.
/// The class count is relative to that modulus.
inline CohomologyReport cohomology_reps(const FiniteGroup& g, std::int64_t modulus,
                                        const EnumOptions& opts = {}) {
  const std::size_t n = g.order();
  std::uint64_t cochains = 1;
  for (std::size_t i = 1; i < n; ++i) {
    cochains *= static_cast<std::uint64_t>(modulus);
    if (cochains > opts.max_enum)
      throw Error(Errc::EnumerationCapExceeded, "1-cochain space exceeds --max-enum");
  }
  std::set<std::vector<std::int64_t>> boundaries;
  std::vector<std::int64_t> c(n, 0);
  for (std::uint64_t idx = 0; idx < cochains; ++idx) {
    std::uint64_t r = idx;
    for (Element h = 0; h < n; ++h) {
      if (h == g.identity()) {
        c[h] = 0;
        continue;
      }
      c[h] = static_cast<std::int64_t>(r % static_cast<std::uint64_t>(modulus));
      r /= static_cast<std::uint64_t>(modulus);
    }
    std::vector<std::int64_t> t(n * n);
    for (Element h = 0; h < n; ++h)
      for (Element k = 0; k < n; ++k) t[h * n + k] = mod_floor(c[h] + c[k] - c[g.mul(h, k)], modulus);
    boundaries.insert(std::move(t));
  }

  auto cocycles = enumerate_cocycles(g, modulus, false, opts);
  std::vector<std::vector<std::int64_t>> keys;
  keys.reserve(cocycles.size());
  for (auto& z : cocycles) keys.emplace_back(z.values().exponents().begin(), z.values().exponents().end());
  std::vector<char> seen(keys.size(), 0);
  CohomologyReport rep{modulus, cocycles.size(), boundaries.size(), {}};
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (seen[i]) continue;
    rep.representatives.push_back(cocycles[i]);
    for (auto& b : boundaries) {
      std::vector<std::int64_t> t(keys[i].size());
      for (std::size_t j = 0; j < t.size(); ++j) t[j] = mod_floor(keys[i][j] + b[j], modulus);
      auto it = std::lower_bound(keys.begin(), keys.end(), t);
      if (it == keys.end() || *it != t) throw Error(Errc::InvalidArgument, "internal: coset left Z^2");
      seen[static_cast<std::size_t>(it - keys.begin())] = 1;
    }
  }
  return rep;
}

}  // namespace charinv
