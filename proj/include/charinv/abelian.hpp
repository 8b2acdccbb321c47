#pragma once

// Finite abelian groups K = Z/n₁ ⊕ … ⊕ Z/n_r, the dual pairing, and
// bicharacters on K.
//
// Elements are exponent tuples; the element id is the mixed-radix number
// with the first coordinate most significant, so id order is lexicographic
// tuple order. The dual group is identified with K coordinate-wise.

#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "charinv/error.hpp"
#include "charinv/group.hpp"
#include "charinv/phase.hpp"

namespace charinv {

using Tuple = std::vector<std::int64_t>;

class AbelianGroup {
 public:
  AbelianGroup() : AbelianGroup(std::vector<std::int64_t>{}) {}

  explicit AbelianGroup(std::vector<std::int64_t> cyclic_orders) {
    auto d = std::make_shared<Data>();
    d->orders = std::move(cyclic_orders);
    std::int64_t n = 1, e = 1;
    for (auto o : d->orders) {
      if (o <= 0) throw Error(Errc::InvalidArgument, "cyclic orders must be positive");
      n *= o;
      e = std::lcm(e, o);
    }
    d->size = static_cast<std::size_t>(n);
    d->exponent = e;
    Table t(d->size, std::vector<Element>(d->size));
    data_ = d;
    for (Element a = 0; a < d->size; ++a)
      for (Element b = 0; b < d->size; ++b) t[a][b] = add(a, b);
    d->table = validate_group(t);
  }

  const std::vector<std::int64_t>& cyclic_orders() const noexcept { return data_->orders; }
  std::size_t rank() const noexcept { return data_->orders.size(); }
  std::size_t order() const noexcept { return data_->size; }
  std::int64_t exponent() const noexcept { return data_->exponent; }

  /// K as a multiplication table (ids as described above).
  const FiniteGroup& as_group() const noexcept { return data_->table; }

  Tuple tuple(Element id) const {
    Tuple t(rank());
    for (std::size_t i = rank(); i-- > 0;) {
      t[i] = static_cast<std::int64_t>(id % static_cast<Element>(data_->orders[i]));
      id /= static_cast<Element>(data_->orders[i]);
    }
    return t;
  }

  Element id(const Tuple& t) const {
    if (t.size() != rank()) throw Error(Errc::ShapeMismatch, "tuple length != rank");
    Element id = 0;
    for (std::size_t i = 0; i < rank(); ++i)
      id = id * static_cast<Element>(data_->orders[i]) +
           static_cast<Element>(mod_floor(t[i], data_->orders[i]));
    return id;
  }

  Element add(Element a, Element b) const {
    Tuple x = tuple(a), y = tuple(b);
    for (std::size_t i = 0; i < rank(); ++i) x[i] += y[i];
    return id(x);
  }
  Element neg(Element a) const {
    Tuple x = tuple(a);
    for (auto& c : x) c = -c;
    return id(x);
  }
  Element scale(Element a, std::int64_t k) const {
    Tuple x = tuple(a);
    for (auto& c : x) c *= k;
    return id(x);
  }
  /// The i-th cyclic generator eᵢ.
  Element generator(std::size_t i) const {
    Tuple x(rank(), 0);
    x[i] = 1;
    return id(x);
  }

  friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) {
    return a.data_->orders == b.data_->orders;
  }

 private:
  struct Data {
    std::vector<std::int64_t> orders;
    std::size_t size = 1;
    std::int64_t exponent = 1;
    FiniteGroup table;
  };
  std::shared_ptr<const Data> data_;
};

inline std::string describe(const AbelianGroup& k) {
  if (k.rank() == 0) return "1";
  std::string s;
  for (std::size_t i = 0; i < k.rank(); ++i) {
    if (i) s += "x";
    s += "Z" + std::to_string(k.cyclic_orders()[i]);
  }
  return s;
}

/// ⟨k, p⟩ = exp(2πi Σ kᵢpᵢ/nᵢ), written over exponent(K).
inline Phase pairing(const AbelianGroup& k, const Tuple& elem, const Tuple& dual) {
  if (elem.size() != k.rank() || dual.size() != k.rank())
    throw Error(Errc::ShapeMismatch, "pairing: tuple length != rank of K");
  const std::int64_t m = k.exponent();
  std::int64_t e = 0;
  for (std::size_t i = 0; i < k.rank(); ++i) {
    const std::int64_t n = k.cyclic_orders()[i];
    e = mod_floor(e + mul_mod(mul_mod(mod_floor(elem[i], n), mod_floor(dual[i], n), m), m / n, m), m);
  }
  return Phase(e, m);
}

inline Phase pairing(const AbelianGroup& k, Element elem, Element dual) {
  return pairing(k, k.tuple(elem), k.tuple(dual));
}

// ---------------------------------------------------------------------------

class Bicharacter;
Bicharacter validate_bicharacter(const AbelianGroup& k, const PhaseFunction& values);

class Bicharacter {
 public:
  const AbelianGroup& group() const noexcept { return k_; }
  const PhaseFunction& values() const noexcept { return values_; }
  std::int64_t modulus() const noexcept { return values_.modulus(); }
  Phase operator()(Element h, Element k) const { return values_.at(h, k); }

  /// κ(eᵢ, eⱼ) on the cyclic generators.
  std::vector<std::vector<Phase>> generator_matrix() const {
    std::vector<std::vector<Phase>> g(k_.rank(), std::vector<Phase>(k_.rank()));
    for (std::size_t i = 0; i < k_.rank(); ++i)
      for (std::size_t j = 0; j < k_.rank(); ++j) g[i][j] = (*this)(k_.generator(i), k_.generator(j));
    return g;
  }

  bool is_trivial() const {
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (!values_.at(i).is_one()) return false;
    return true;
  }

  friend bool operator==(const Bicharacter& a, const Bicharacter& b) {
    return a.k_ == b.k_ && a.values_ == b.values_;
  }

 private:
  Bicharacter(AbelianGroup k, PhaseFunction v) : k_(std::move(k)), values_(std::move(v)) {}
  AbelianGroup k_;
  PhaseFunction values_;
  friend Bicharacter validate_bicharacter(const AbelianGroup& k, const PhaseFunction& values);
};

/// Checks κ(e,·) = κ(·,e) = 1 and multiplicativity in each slot; the
/// witness of NotBimultiplicative is (slot, a, b, c).
inline Bicharacter validate_bicharacter(const AbelianGroup& k, const PhaseFunction& values) {
  const std::size_t n = k.order();
  if (values.shape() != std::vector<std::size_t>{n, n})
    throw Error(Errc::ShapeMismatch, "bicharacter table must be |K|x|K|");
  const std::int64_t m = values.modulus();
  auto e = [&](Element a, Element b) { return values.exponent(a, b); };
  for (Element a = 0; a < n; ++a)
    if (e(0, a) != 0 || e(a, 0) != 0)
      throw Error(Errc::NotBimultiplicative, "value at identity is not 1",
                  {0, static_cast<std::int64_t>(a)});
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      for (Element c = 0; c < n; ++c) {
        if (e(k.add(a, b), c) != mod_floor(e(a, c) + e(b, c), m))
          throw Error(Errc::NotBimultiplicative, "k(ab,c) != k(a,c)k(b,c)",
                      {1, static_cast<std::int64_t>(a), static_cast<std::int64_t>(b),
                       static_cast<std::int64_t>(c)});
        if (e(a, k.add(b, c)) != mod_floor(e(a, b) + e(a, c), m))
          throw Error(Errc::NotBimultiplicative, "k(a,bc) != k(a,b)k(a,c)",
                      {2, static_cast<std::int64_t>(a), static_cast<std::int64_t>(b),
                       static_cast<std::int64_t>(c)});
      }
  return Bicharacter(k, values);
}

inline Bicharacter trivial_bicharacter(const AbelianGroup& k) {
  return validate_bicharacter(k, PhaseFunction({k.order(), k.order()}, k.exponent()));
}

/// The bicharacter with κ(eᵢ,eⱼ) = gen[i][j], extended bimultiplicatively.
/// Tables are written over lcm(exponent(K), entry moduli).
inline Bicharacter bicharacter_from_generators(const AbelianGroup& k,
                                               const std::vector<std::vector<Phase>>& gen) {
  if (gen.size() != k.rank()) throw Error(Errc::ShapeMismatch, "generator matrix must be r x r");
  std::int64_t m = k.exponent();
  for (auto& row : gen) {
    if (row.size() != k.rank()) throw Error(Errc::ShapeMismatch, "generator matrix must be r x r");
    for (auto& p : row) m = checked_lcm(m, p.modulus(), kDefaultModulusCap);
  }
  for (std::size_t i = 0; i < k.rank(); ++i)
    for (std::size_t j = 0; j < k.rank(); ++j) {
      const std::int64_t g = std::gcd(k.cyclic_orders()[i], k.cyclic_orders()[j]);
      if (g % gen[i][j].order() != 0)
        throw Error(Errc::NotBimultiplicative,
                    "generator value order does not divide gcd(n_i, n_j)",
                    {static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)});
    }
  PhaseFunction v({k.order(), k.order()}, m);
  for (Element a = 0; a < k.order(); ++a)
    for (Element b = 0; b < k.order(); ++b) {
      const Tuple x = k.tuple(a), y = k.tuple(b);
      std::int64_t e = 0;
      for (std::size_t i = 0; i < k.rank(); ++i)
        for (std::size_t j = 0; j < k.rank(); ++j)
          e = mod_floor(e + mul_mod(gen[i][j].rescaled(m).exponent(), mul_mod(x[i], y[j], m), m), m);
      v.set_exponent(a, b, e);
    }
  return validate_bicharacter(k, v);
}

/// Every bicharacter on K, ordered by generator-matrix exponents
/// (row-major, over exponent(K)). There are ∏ᵢⱼ gcd(nᵢ,nⱼ) of them.
inline std::vector<Bicharacter> enumerate_bicharacters(const AbelianGroup& k,
                                                       const EnumOptions& opts = {}) {
  const std::size_t r = k.rank();
  const std::int64_t m = k.exponent();
  std::vector<std::int64_t> steps, counts;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      const std::int64_t g = std::gcd(k.cyclic_orders()[i], k.cyclic_orders()[j]);
      counts.push_back(g);
      steps.push_back(m / g);
      total *= static_cast<std::uint64_t>(g);
      if (total > opts.max_enum)
        throw Error(Errc::EnumerationCapExceeded, "bicharacter count exceeds --max-enum");
    }
  std::vector<Bicharacter> out;
  std::vector<std::int64_t> digit(counts.size(), 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<std::vector<Phase>> gen(r, std::vector<Phase>(r));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) gen[i][j] = Phase(digit[i * r + j] * steps[i * r + j], m);
    out.push_back(bicharacter_from_generators(k, gen));
    for (std::size_t d = counts.size(); d-- > 0;) {
      if (++digit[d] < counts[d]) break;
      digit[d] = 0;
    }
  }
  return out;
}

/// Automorphisms of K as homs on K.as_group(), found by brute force over
/// generator images.
inline std::vector<GroupHom> automorphisms(const AbelianGroup& k, const EnumOptions& opts = {}) {
  if (k.order() > 16)
    throw Error(Errc::EnumerationCapExceeded, "automorphism search is capped at |K| <= 16");
  std::vector<GroupHom> out;
  for (auto& f : enumerate_homs(k.as_group(), k.as_group(), opts))
    if (f.is_bijective()) out.push_back(std::move(f));
  return out;
}

inline bool is_aut_invariant(const Bicharacter& kappa, const GroupHom& theta) {
  const AbelianGroup& k = kappa.group();
  if (!(theta.source() == k.as_group()) || !(theta.target() == k.as_group()) || !theta.is_bijective())
    throw Error(Errc::NotAutomorphism, "theta is not an automorphism of K");
  for (Element a = 0; a < k.order(); ++a)
    for (Element b = 0; b < k.order(); ++b)
      if (!(kappa(theta(a), theta(b)) == kappa(a, b))) return false;
  return true;
}

inline bool is_cyclic(const AbelianGroup& k) {
  const FiniteGroup& g = k.as_group();
  for (Element a = 0; a < g.order(); ++a)
    if (g.element_order(a) == g.order()) return true;
  return false;
}

/// Evaluates κ(gᵐ, gⁿ) == κ(g,g)^{mn} for a generator g of cyclic K.
inline bool cyclic_power_identity(const Bicharacter& kappa, Element g, std::int64_t m, std::int64_t n) {
  const AbelianGroup& k = kappa.group();
  if (!is_cyclic(k)) throw Error(Errc::NotCyclic, "K = " + describe(k) + " is not cyclic");
  if (g >= k.order() || k.as_group().element_order(g) != k.order())
    throw Error(Errc::NotGenerator, "element does not generate K", {static_cast<std::int64_t>(g)});
  const Element gm = k.as_group().pow(g, m), gn = k.as_group().pow(g, n);
  const Phase diag = kappa(g, g);
  const std::int64_t mn = mul_mod(mod_floor(m, diag.modulus()), mod_floor(n, diag.modulus()), diag.modulus());
  return kappa(gm, gn) == phase_pow(diag, mn);
}

}  // namespace charinv
