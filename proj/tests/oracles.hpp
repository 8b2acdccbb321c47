#pragma once

// Brute-force reference implementations. They share no code with the
// library beyond the group and table containers: phases are reduced
// fractions in [0, 1), and every search is a plain exhaustive loop.

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "charinv/group.hpp"
#include "charinv/pair.hpp"

namespace oracle {

using charinv::Element;
using charinv::FiniteGroup;

/// A point of Q/Z, stored reduced.
struct Frac {
  std::int64_t num = 0, den = 1;

  Frac() = default;
  Frac(std::int64_t n, std::int64_t d) {
    n %= d;
    if (n < 0) n += d;
    const std::int64_t g = std::gcd(n, d);
    num = n / g;
    den = d / g;
  }
  friend Frac operator+(Frac a, Frac b) {
    const std::int64_t l = std::lcm(a.den, b.den);
    return {a.num * (l / a.den) + b.num * (l / b.den), l};
  }
  friend Frac operator-(Frac a) { return {-a.num, a.den}; }
  friend Frac operator-(Frac a, Frac b) { return a + (-b); }
  friend bool operator==(Frac a, Frac b) { return a.num == b.num && a.den == b.den; }
  bool zero() const { return num == 0; }
};

inline Frac frac(const charinv::Phase& p) { return {p.exponent(), p.modulus()}; }

/// Which of the five defining relations fail, evaluated element by element.
inline std::set<int> failing_relations(const charinv::PairContext& ctx,
                                       const std::function<Frac(Element, Element)>& lam,
                                       const std::function<Frac(Element, Element)>& mu) {
  const FiniteGroup& g = ctx.group();
  const auto& h = ctx.subgroup().members();
  const Element e = g.identity();
  auto conj = [&](Element x, Element y) { return g.mul(g.mul(g.inv(x), y), x); };
  auto kap = [&](Element a, Element b) { return frac(ctx.kappa(ctx.nu(a), ctx.nu(b))); };
  std::set<int> bad;
  for (Element a : h)
    for (Element b : h)
      for (Element c : h)
        if (!(mu(a, b) + mu(g.mul(a, b), c) == mu(b, c) + mu(a, g.mul(b, c)))) bad.insert(1);
  for (Element x = 0; x < g.order(); ++x)
    for (Element y = 0; y < g.order(); ++y)
      for (Element a : h)
        if (!(lam(g.mul(x, y), a) == lam(x, a) + lam(y, conj(x, a)))) bad.insert(2);
  for (Element x = 0; x < g.order(); ++x)
    for (Element a : h)
      for (Element b : h)
        if (!(lam(x, g.mul(a, b)) - lam(x, a) - lam(x, b) == mu(a, b) - mu(conj(x, a), conj(x, b)))) bad.insert(3);
  for (Element a : h)
    for (Element b : h)
      if (!(lam(a, b) == mu(a, conj(a, b)) - mu(b, a) - kap(b, a))) bad.insert(4);
  for (Element a : h) {
    if (!lam(e, a).zero() || !mu(e, a).zero() || !mu(a, e).zero()) bad.insert(5);
  }
  for (Element x = 0; x < g.order(); ++x)
    if (!lam(x, e).zero()) bad.insert(5);
  return bad;
}

inline std::set<int> failing_relations(const charinv::PairContext& ctx, const charinv::PhaseFunction& lam,
                                       const charinv::PhaseFunction& mu) {
  const auto& s = ctx.subgroup();
  return failing_relations(
      ctx, [&](Element x, Element a) { return frac(lam.at(x, s.index_of(a))); },
      [&](Element a, Element b) { return frac(mu.at(s.index_of(a), s.index_of(b))); });
}

/// Every normalized (λ, μ) at modulus m passing all relations, as flat
/// exponent keys (λ row-major, then μ), in increasing order.
inline std::vector<std::vector<std::int64_t>> all_pairs(const charinv::PairContext& ctx, std::int64_t m,
                                                        std::uint64_t cap = 2'000'000) {
  const FiniteGroup& g = ctx.group();
  const auto& s = ctx.subgroup();
  const std::size_t ng = g.order(), nh = s.size();
  const Element e = g.identity();
  std::vector<std::size_t> free;
  for (Element x = 0; x < ng; ++x)
    for (std::size_t j = 0; j < nh; ++j)
      if (x != e && s.at(j) != e) free.push_back(x * nh + j);
  for (std::size_t i = 0; i < nh; ++i)
    for (std::size_t j = 0; j < nh; ++j)
      if (s.at(i) != e && s.at(j) != e) free.push_back(ng * nh + i * nh + j);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < free.size(); ++i) {
    total *= static_cast<std::uint64_t>(m);
    if (total > cap) throw std::runtime_error("oracle search space too large");
  }
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> key(ng * nh + nh * nh, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t r = idx;
    for (std::size_t f = free.size(); f-- > 0;) {
      key[free[f]] = static_cast<std::int64_t>(r % static_cast<std::uint64_t>(m));
      r /= static_cast<std::uint64_t>(m);
    }
    auto lam = [&](Element x, Element a) { return Frac(key[x * nh + s.index_of(a)], m); };
    auto mu = [&](Element a, Element b) { return Frac(key[ng * nh + s.index_of(a) * nh + s.index_of(b)], m); };
    if (failing_relations(ctx, lam, mu).empty()) out.push_back(key);
  }
  return out;
}

/// Orbits of `pairs` under every normalized c: H → (1/m)Z/Z, as sorted
/// lists of member keys.
inline std::vector<std::vector<std::vector<std::int64_t>>> orbits(
    const charinv::PairContext& ctx, std::int64_t m, const std::vector<std::vector<std::int64_t>>& pairs) {
  const FiniteGroup& g = ctx.group();
  const auto& s = ctx.subgroup();
  const std::size_t ng = g.order(), nh = s.size();
  std::uint64_t nc = 1;
  for (std::size_t i = 1; i < nh; ++i) nc *= static_cast<std::uint64_t>(m);
  std::set<std::vector<std::int64_t>> remaining(pairs.begin(), pairs.end());
  std::vector<std::vector<std::vector<std::int64_t>>> out;
  while (!remaining.empty()) {
    const auto start = *remaining.begin();
    std::set<std::vector<std::int64_t>> orbit;
    for (std::uint64_t idx = 0; idx < nc; ++idx) {
      std::vector<std::int64_t> c(nh, 0);
      std::uint64_t r = idx;
      for (std::size_t j = 0; j < nh; ++j)
        if (s.at(j) != g.identity()) {
          c[j] = static_cast<std::int64_t>(r % static_cast<std::uint64_t>(m));
          r /= static_cast<std::uint64_t>(m);
        }
      auto cv = [&](Element a) { return c[s.index_of(a)]; };
      std::vector<std::int64_t> k = start;
      for (Element x = 0; x < ng; ++x)
        for (std::size_t j = 0; j < nh; ++j) {
          const Element a = s.at(j);
          const Element conj = g.mul(g.mul(g.inv(x), a), x);
          k[x * nh + j] = ((k[x * nh + j] + cv(conj) - cv(a)) % m + m) % m;
        }
      for (std::size_t i = 0; i < nh; ++i)
        for (std::size_t j = 0; j < nh; ++j) {
          auto& v = k[ng * nh + i * nh + j];
          v = ((v + c[i] + c[j] - cv(g.mul(s.at(i), s.at(j)))) % m + m) % m;
        }
      orbit.insert(k);
    }
    for (auto& k : orbit) remaining.erase(k);
    out.emplace_back(orbit.begin(), orbit.end());
  }
  return out;
}

/// All maps G → K that are homomorphisms, by exhausting |K|^|G| tables.
inline std::vector<std::vector<Element>> all_homs(const FiniteGroup& g, const FiniteGroup& k) {
  std::vector<std::vector<Element>> out;
  std::vector<Element> f(g.order(), 0);
  while (true) {
    bool ok = true;
    for (Element a = 0; a < g.order() && ok; ++a)
      for (Element b = 0; b < g.order() && ok; ++b) ok = f[g.mul(a, b)] == k.mul(f[a], f[b]);
    if (ok) out.push_back(f);
    std::size_t i = 0;
    for (; i < f.size(); ++i) {
      if (++f[i] < k.order()) break;
      f[i] = 0;
    }
    if (i == f.size()) return out;
  }
}

/// Every normalized 2-cocycle table at modulus m, checked entrywise.
inline std::vector<std::vector<std::int64_t>> all_cocycles(const FiniteGroup& g, std::int64_t m,
                                                           bool symmetric_only = false) {
  const std::size_t n = g.order();
  const Element e = g.identity();
  std::vector<std::size_t> free;
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      if (a != e && b != e) free.push_back(a * n + b);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < free.size(); ++i) total *= static_cast<std::uint64_t>(m);
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> t(n * n, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t r = idx;
    for (std::size_t f = free.size(); f-- > 0;) {
      t[free[f]] = static_cast<std::int64_t>(r % static_cast<std::uint64_t>(m));
      r /= static_cast<std::uint64_t>(m);
    }
    bool ok = true;
    for (Element a = 0; a < n && ok; ++a)
      for (Element b = 0; b < n && ok; ++b)
        for (Element c = 0; c < n && ok; ++c)
          ok = (t[a * n + b] + t[g.mul(a, b) * n + c] - t[b * n + c] - t[a * n + g.mul(b, c)]) % m == 0;
    if (ok && symmetric_only)
      for (Element a = 0; a < n && ok; ++a)
        for (Element b = 0; b < n && ok; ++b) ok = t[a * n + b] == t[b * n + a];
    if (ok) out.push_back(t);
  }
  return out;
}

/// Every x ∈ (Z/m)^cols with A·x ≡ b, in lexicographic order.
inline std::vector<std::vector<std::int64_t>> all_solutions(const std::vector<std::vector<std::int64_t>>& a,
                                                            const std::vector<std::int64_t>& b, std::size_t cols,
                                                            std::int64_t m) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> x(cols, 0);
  while (true) {
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i) {
      std::int64_t s = -b[i];
      for (std::size_t j = 0; j < cols; ++j) s += a[i][j] * x[j];
      ok = ((s % m) + m) % m == 0;
    }
    if (ok) out.push_back(x);
    std::size_t j = cols;
    while (j-- > 0) {
      if (++x[j] < m) break;
      x[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) return out;
  }
}

}  // namespace oracle
