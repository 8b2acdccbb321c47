#pragma once

// ν: H → K and the question whether it extends to a homomorphism G → K.
//
// decide_extension reduces to linear congruences over a presentation of
// the abelianization; decide_extension_oracle exhausts Hom(G, K). The
// infinite-cyclic case G = Z is handled separately by bezout_extension.

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "charinv/abelian.hpp"
#include "charinv/error.hpp"
#include "charinv/group.hpp"
#include "charinv/linear_mod.hpp"

namespace charinv {

/// A candidate map H → K, values indexed by position in H.members().
struct NuMap {
  FiniteGroup g;
  Subgroup h;
  AbelianGroup k;
  std::vector<Element> values;

  Element operator()(Element x) const { return values[h.index_of(x)]; }
};

enum class NuDefect { None, NotHomomorphic, NonEquivariant };

struct EquivarianceCheck {
  NuDefect defect = NuDefect::None;
  std::vector<Element> witness;  // (h,k) or (g,h)
  bool ok() const noexcept { return defect == NuDefect::None; }
};

/// ν must be a hom on H with ν(g⁻¹hg) = ν(h) for all g ∈ G, h ∈ H.
inline EquivarianceCheck check_equivariant(const NuMap& nu) {
  if (!is_normal(nu.g, nu.h)) throw Error(Errc::NotNormal, "H is not normal in G");
  if (nu.values.size() != nu.h.size()) throw Error(Errc::ShapeMismatch, "one nu value per element of H");
  for (Element v : nu.values)
    if (v >= nu.k.order()) throw Error(Errc::InvalidArgument, "nu value outside K");
  for (Element a : nu.h.members())
    for (Element b : nu.h.members())
      if (nu(nu.g.mul(a, b)) != nu.k.add(nu(a), nu(b))) return {NuDefect::NotHomomorphic, {a, b}};
  for (Element x = 0; x < nu.g.order(); ++x)
    for (Element a : nu.h.members())
      if (nu(nu.g.conj(x, a)) != nu(a)) return {NuDefect::NonEquivariant, {x, a}};
  return {};
}

/// A validated, G-equivariant homomorphism H → K.
class NuInvariant {
 public:
  explicit NuInvariant(NuMap map) : map_(std::move(map)) {
    auto check = check_equivariant(map_);
    if (check.defect == NuDefect::NotHomomorphic)
      throw Error(Errc::NotHomomorphism, "nu is not a homomorphism on H",
                  {static_cast<std::int64_t>(check.witness[0]), static_cast<std::int64_t>(check.witness[1])});
    if (check.defect == NuDefect::NonEquivariant)
      throw Error(Errc::NonEquivariant, "nu(g^-1 h g) != nu(h)",
                  {static_cast<std::int64_t>(check.witness[0]), static_cast<std::int64_t>(check.witness[1])});
  }

  const FiniteGroup& group() const noexcept { return map_.g; }
  const Subgroup& subgroup() const noexcept { return map_.h; }
  const AbelianGroup& target() const noexcept { return map_.k; }
  const std::vector<Element>& values() const noexcept { return map_.values; }
  const NuMap& map() const noexcept { return map_; }
  Element operator()(Element x) const { return map_(x); }

  friend bool operator==(const NuInvariant& a, const NuInvariant& b) {
    return a.map_.values == b.map_.values && a.map_.h == b.map_.h && a.map_.k == b.map_.k;
  }

 private:
  NuMap map_;
};

inline NuInvariant trivial_nu(const FiniteGroup& g, const Subgroup& h, const AbelianGroup& k) {
  return NuInvariant(NuMap{g, h, k, std::vector<Element>(h.size(), 0)});
}

/// Every equivariant ν: H → K.
inline std::vector<NuInvariant> enumerate_nus(const FiniteGroup& g, const Subgroup& h, const AbelianGroup& k,
                                              const EnumOptions& opts = {}) {
  std::vector<NuInvariant> out;
  for (auto& f : enumerate_homs(h.as_group(), k.as_group(), opts)) {
    NuMap m{g, h, k, f.image()};
    if (check_equivariant(m).ok()) out.emplace_back(std::move(m));
  }
  return out;
}

// ---------------------------------------------------------------------------

enum class ObstructionKind {
  None,
  NotHomomorphic,
  NonEquivariant,
  KillsCommutatorFails,
  AbelianObstruction,
  NoRestrictingHom,
};

inline std::string obstruction_name(ObstructionKind k) {
  switch (k) {
    case ObstructionKind::None: return "None";
    case ObstructionKind::NotHomomorphic: return "NotHomomorphic";
    case ObstructionKind::NonEquivariant: return "NonEquivariant";
    case ObstructionKind::KillsCommutatorFails: return "KillsCommutatorFails";
    case ObstructionKind::AbelianObstruction: return "AbelianObstruction";
    case ObstructionKind::NoRestrictingHom: return "NoRestrictingHom";
  }
  return "Unknown";
}

struct Obstruction {
  ObstructionKind kind = ObstructionKind::None;
  std::vector<Element> witness;
  std::string detail;
};

struct ExtensionCertificate {
  bool extends = false;
  std::optional<GroupHom> witness;  // G → K.as_group() when extends
  Obstruction obstruction;
};

/// f restricted to H equals ν.
inline bool restricts_to(const GroupHom& f, const NuMap& nu) {
  if (!(f.source() == nu.g) || !(f.target() == nu.k.as_group())) return false;
  for (std::size_t i = 0; i < nu.h.size(); ++i)
    if (f(nu.h.at(i)) != nu.values[i]) return false;
  return true;
}

namespace detail {

/// Words for the elements of an abelian group A over its greedy generators,
/// plus the edge relations of the Cayley tree, which generate all relations.
struct AbelianPresentation {
  std::vector<Element> gens;
  std::vector<std::vector<std::int64_t>> word;  // word[a] ∈ Z^r
  std::vector<std::vector<std::int64_t>> relations;

  explicit AbelianPresentation(const FiniteGroup& a) {
    CayleyTree tree(a);
    gens = tree.gens;
    const std::size_t r = gens.size();
    word.assign(a.order(), std::vector<std::int64_t>(r, 0));
    for (std::size_t i = 1; i < tree.bfs.size(); ++i) {
      const Element x = tree.bfs[i];
      word[x] = word[tree.parent[x]];
      word[x][tree.via[x]] += 1;
    }
    for (Element x = 0; x < a.order(); ++x)
      for (std::size_t s = 0; s < r; ++s) {
        std::vector<std::int64_t> rel = word[x];
        rel[s] += 1;
        const auto& w = word[a.mul(x, gens[s])];
        for (std::size_t t = 0; t < r; ++t) rel[t] -= w[t];
        if (std::any_of(rel.begin(), rel.end(), [](std::int64_t v) { return v != 0; }))
          relations.push_back(std::move(rel));
      }
  }
};

}  // namespace detail

/// Stages: (0) ν is an equivariant hom, (1) ν kills H ∩ [G,G], (2) push to
/// the abelianization, (3) solve for generator images coordinate by
/// coordinate of K, (4) lift and re-validate.
inline ExtensionCertificate decide_extension(const NuMap& nu) {
  ExtensionCertificate cert;
  auto eq = check_equivariant(nu);
  if (!eq.ok()) {
    cert.obstruction.kind =
        eq.defect == NuDefect::NotHomomorphic ? ObstructionKind::NotHomomorphic : ObstructionKind::NonEquivariant;
    cert.obstruction.witness = eq.witness;
    cert.obstruction.detail = eq.defect == NuDefect::NotHomomorphic
                                  ? "nu(hk) != nu(h)nu(k)"
                                  : "nu(g^-1 h g) != nu(h); a hom into abelian K is conjugation invariant";
    return cert;
  }

  const Subgroup comm = commutator_subgroup(nu.g);
  for (Element x : nu.h.members())
    if (comm.contains(x) && nu(x) != 0) {
      cert.obstruction = {ObstructionKind::KillsCommutatorFails, {x},
                          "h lies in [G,G] but nu(h) != e; every hom into abelian K kills [G,G]"};
      return cert;
    }

  const Quotient ab = abelianization(nu.g);
  const detail::AbelianPresentation pres(ab.group);
  const std::size_t r = pres.gens.size();
  const AbelianGroup& k = nu.k;

  // generator images, one K-coordinate at a time
  std::vector<Tuple> gen_image(r, Tuple(k.rank(), 0));
  for (std::size_t j = 0; j < k.rank(); ++j) {
    const std::int64_t nj = k.cyclic_orders()[j];
    IntMatrix a(0, r);
    std::vector<std::int64_t> rhs;
    for (auto& rel : pres.relations) {
      const std::size_t row = a.add_row();
      for (std::size_t t = 0; t < r; ++t) a(row, t) = rel[t];
      rhs.push_back(0);
    }
    std::optional<std::vector<std::int64_t>> sol;
    for (std::size_t i = 0; i < nu.h.size(); ++i) {
      const Element x = nu.h.at(i);
      const auto& w = pres.word[ab.projection(x)];
      const std::size_t row = a.add_row();
      for (std::size_t t = 0; t < r; ++t) a(row, t) = w[t];
      rhs.push_back(k.tuple(nu.values[i])[j]);
      if (!solution_space(a, rhs, nj)) {
        cert.obstruction = {ObstructionKind::AbelianObstruction, {x},
                            "coordinate " + std::to_string(j) + " of K (Z/" + std::to_string(nj) +
                                "): the congruences for the abelianized generators become "
                                "inconsistent at h"};
        return cert;
      }
    }
    sol = solve_linear_mod(a, rhs, nj);
    for (std::size_t t = 0; t < r; ++t) gen_image[t][j] = (*sol)[t];
  }

  std::vector<Element> img(nu.g.order());
  for (Element x = 0; x < nu.g.order(); ++x) {
    const auto& w = pres.word[ab.projection(x)];
    Tuple v(k.rank(), 0);
    for (std::size_t t = 0; t < r; ++t)
      for (std::size_t j = 0; j < k.rank(); ++j) v[j] += w[t] * gen_image[t][j];
    img[x] = k.id(v);
  }
  GroupHom f = validate_hom(nu.g, k.as_group(), std::move(img));
  if (!restricts_to(f, nu)) throw Error(Errc::NotAnExtension, "internal: lifted hom does not restrict to nu");
  cert.extends = true;
  cert.witness = std::move(f);
  return cert;
}

inline ExtensionCertificate decide_extension(const NuInvariant& nu) { return decide_extension(nu.map()); }

/// Exhausts Hom(G, K) and returns the first hom that restricts to ν.
inline ExtensionCertificate decide_extension_oracle(const NuMap& nu, const EnumOptions& opts = {}) {
  ExtensionCertificate cert;
  for (auto& f : enumerate_homs(nu.g, nu.k.as_group(), opts))
    if (restricts_to(f, nu)) {
      cert.extends = true;
      cert.witness = std::move(f);
      return cert;
    }
  cert.obstruction = {ObstructionKind::NoRestrictingHom, {}, "no hom G -> K restricts to nu"};
  return cert;
}

inline ExtensionCertificate decide_extension_oracle(const NuInvariant& nu, const EnumOptions& opts = {}) {
  return decide_extension_oracle(nu.map(), opts);
}

// ---------------------------------------------------------------------------
// G = Z: ν(pm) = [σ^m] with σ of outer period n.

struct CyclicNuExtension {
  std::int64_t p;  // strongly outer period
  std::int64_t n;  // outer period of σ
  std::int64_t k;
  std::int64_t l;  // p·k + n·l = 1
  std::int64_t multiplier;  // k mod n

  /// Exponent of σ assigned to g ∈ Z, reduced mod n.
  std::int64_t nu(std::int64_t g) const { return mod_floor(mul_mod(mod_floor(g, n), multiplier, n), n); }

  /// ν̃(p·m) ≡ m (mod n) for every residue m.
  bool restricts_correctly() const {
    for (std::int64_t m = 0; m < n; ++m)
      if (nu(p * m) != mod_floor(m, n)) return false;
    return true;
  }
};

/// k is the least positive solution of p·k ≡ 1 (mod n); l = (1 − p·k)/n.
inline CyclicNuExtension bezout_extension(std::int64_t p, std::int64_t n) {
  if (p < 1 || n < 1) throw Error(Errc::InvalidArgument, "p and n must be positive");
  if (std::gcd(p, n) != 1)
    throw Error(Errc::NotCoprime, "gcd(" + std::to_string(p) + ", " + std::to_string(n) + ") != 1", {p, n});
  std::int64_t k = n == 1 ? 1 : inverse_mod(p, n);
  if (k == 0) k = n;
  const std::int64_t l = (1 - p * k) / n;
  CyclicNuExtension ext{p, n, k, l, mod_floor(k, n)};
  if (p * k + n * l != 1 || !ext.restricts_correctly())
    throw Error(Errc::InvalidArgument, "internal: Bezout certificate failed verification");
  return ext;
}

// ---------------------------------------------------------------------------
// G = H ⋊ Q: ν(h,q) := ν_H(h).

struct SemidirectExtension {
  FiniteGroup group;   // H ⋊ Q
  Subgroup normal;     // H × {e}
  NuInvariant nu;      // ν_H on H × {e}
  ExtensionCertificate certificate;
};

/// Requires ν_H(act(q)(h)) = ν_H(h). The homomorphism property of
/// ν(h,q) = ν_H(h) is checked along the chain
///   ν((h₁,q₁)(h₂,q₂)) = ν(h₁·act(q₁)(h₂), q₁q₂) = ν_H(h₁·act(q₁)(h₂))
///                     = ν_H(h₁)ν_H(act(q₁)(h₂)) = ν(h₁,q₁)ν(h₂,q₂).
inline SemidirectExtension semidirect_extension(const FiniteGroup& h, const FiniteGroup& q,
                                                const std::vector<std::vector<Element>>& act,
                                                const AbelianGroup& k, const std::vector<Element>& nu_h) {
  const GroupHom nu_hom = validate_hom(h, k.as_group(), nu_h);
  const FiniteGroup g = semidirect_product(h, q, act);
  for (Element s = 0; s < q.order(); ++s)
    for (Element x = 0; x < h.order(); ++x)
      if (nu_hom(act[s][x]) != nu_hom(x))
        throw Error(Errc::NotActInvariant, "nu_H(act(q)(h)) != nu_H(h)",
                    {static_cast<std::int64_t>(s), static_cast<std::int64_t>(x)});

  const std::size_t nh = h.order();
  auto nu = [&](Element pair) { return nu_hom(pair % nh); };
  const FiniteGroup& kg = k.as_group();
  for (Element a = 0; a < g.order(); ++a)
    for (Element b = 0; b < g.order(); ++b) {
      const Element h1 = a % nh, q1 = a / nh, h2 = b % nh, q2 = b / nh;
      const Element prod = q.mul(q1, q2) * nh + h.mul(h1, act[q1][h2]);
      const bool line1 = g.mul(a, b) == prod;
      const bool line2 = nu(prod) == nu_hom(h.mul(h1, act[q1][h2]));
      const bool line3 = nu_hom(h.mul(h1, act[q1][h2])) == kg.mul(nu_hom(h1), nu_hom(act[q1][h2]));
      const bool line4 = kg.mul(nu_hom(h1), nu_hom(act[q1][h2])) == kg.mul(nu(a), nu(b));
      if (!(line1 && line2 && line3 && line4))
        throw Error(Errc::NotHomomorphism, "internal: semidirect extension chain failed",
                    {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)});
    }
  std::vector<Element> img(g.order());
  for (Element a = 0; a < g.order(); ++a) img[a] = nu(a);
  GroupHom ext = validate_hom(g, kg, std::move(img));

  std::vector<Element> members(nh);
  for (Element x = 0; x < nh; ++x) members[x] = q.identity() * nh + x;
  Subgroup normal = make_subgroup(g, members);
  std::vector<Element> values(nh);
  for (std::size_t i = 0; i < nh; ++i) values[i] = nu_hom(normal.at(i) % nh);
  NuInvariant nu_inv(NuMap{g, normal, k, values});
  ExtensionCertificate cert;
  cert.extends = true;
  cert.witness = std::move(ext);
  if (!restricts_to(*cert.witness, nu_inv.map()))
    throw Error(Errc::NotAnExtension, "internal: semidirect extension does not restrict to nu_H");
  return {g, normal, std::move(nu_inv), std::move(cert)};
}

}  // namespace charinv
