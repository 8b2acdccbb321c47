#pragma once

// Finite groups as validated multiplication tables.
//
// Elements are dense ids 0..n-1. A group value is an immutable handle onto
// shared table data, so copies are cheap and safe to pass across threads.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "charinv/error.hpp"

namespace charinv {

using Element = std::size_t;
using Table = std::vector<std::vector<Element>>;

class FiniteGroup;
FiniteGroup validate_group(const Table& table);

class FiniteGroup {
 public:
  /// The trivial group.
  FiniteGroup() : FiniteGroup(make_trivial()) {}

  std::size_t order() const noexcept { return data_->n; }
  Element identity() const noexcept { return data_->identity; }
  Element mul(Element a, Element b) const noexcept { return data_->table[a * data_->n + b]; }
  Element inv(Element a) const noexcept { return data_->inv[a]; }
  /// g⁻¹·h·g
  Element conj(Element g, Element h) const noexcept { return mul(mul(inv(g), h), g); }

  Element pow(Element a, std::int64_t e) const {
    const auto ord = static_cast<std::int64_t>(element_order(a));
    e %= ord;
    if (e < 0) e += ord;
    Element r = identity();
    for (std::int64_t i = 0; i < e; ++i) r = mul(r, a);
    return r;
  }

  std::size_t element_order(Element a) const noexcept {
    std::size_t k = 1;
    for (Element x = a; x != identity(); x = mul(x, a)) ++k;
    return k;
  }

  std::span<const Element> row(Element a) const noexcept {
    return {data_->table.data() + a * data_->n, data_->n};
  }

  Table table() const {
    Table t(order());
    for (Element a = 0; a < order(); ++a) t[a].assign(row(a).begin(), row(a).end());
    return t;
  }

  bool is_abelian() const noexcept {
    for (Element a = 0; a < order(); ++a)
      for (Element b = a + 1; b < order(); ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.data_ == b.data_ || (a.data_->n == b.data_->n && a.data_->table == b.data_->table);
  }

 private:
  struct Data {
    std::size_t n = 1;
    std::vector<Element> table{0};
    Element identity = 0;
    std::vector<Element> inv{0};
  };

  explicit FiniteGroup(std::shared_ptr<const Data> d) : data_(std::move(d)) {}

  static std::shared_ptr<const Data> make_trivial() {
    static const auto trivial = std::make_shared<const Data>();
    return trivial;
  }

  std::shared_ptr<const Data> data_;

  friend FiniteGroup validate_group(const Table& table);
};

/// Validates a Cayley table. Checks run in the order: shape, Latin square,
/// identity, associativity; the error witness names the first bad cell.
inline FiniteGroup validate_group(const Table& table) {
  const std::size_t n = table.size();
  if (n == 0) throw Error(Errc::ShapeMismatch, "empty table");
  for (std::size_t a = 0; a < n; ++a) {
    if (table[a].size() != n)
      throw Error(Errc::ShapeMismatch, "row " + std::to_string(a) + " has wrong length",
                  {static_cast<std::int64_t>(a)});
    for (std::size_t b = 0; b < n; ++b)
      if (table[a][b] >= n)
        throw Error(Errc::InvalidArgument, "entry out of range",
                    {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)});
  }

  std::vector<char> seen(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t b = 0; b < n; ++b) {
      if (seen[table[a][b]])
        throw Error(Errc::NotLatinSquare,
                    "row " + std::to_string(a) + " repeats an entry at column " + std::to_string(b),
                    {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)});
      seen[table[a][b]] = 1;
    }
  }
  for (std::size_t b = 0; b < n; ++b) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t a = 0; a < n; ++a) {
      if (seen[table[a][b]])
        throw Error(Errc::NotLatinSquare,
                    "column " + std::to_string(b) + " repeats an entry at row " + std::to_string(a),
                    {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)});
      seen[table[a][b]] = 1;
    }
  }

  std::optional<Element> identity;
  for (std::size_t e = 0; e < n && !identity; ++e) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) ok = table[e][a] == a && table[a][e] == a;
    if (ok) identity = e;
  }
  if (!identity) throw Error(Errc::NoIdentity, "no two-sided identity");

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw Error(Errc::NotAssociative, "(ab)c != a(bc)",
                      {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b),
                       static_cast<std::int64_t>(c)});

  auto d = std::make_shared<FiniteGroup::Data>();
  d->n = n;
  d->identity = *identity;
  d->table.resize(n * n);
  d->inv.resize(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      d->table[a * n + b] = table[a][b];
      if (table[a][b] == *identity) d->inv[a] = b;
    }
  return FiniteGroup(std::move(d));
}

// ---------------------------------------------------------------------------
// Homomorphisms

class GroupHom {
 public:
  GroupHom(FiniteGroup source, FiniteGroup target, std::vector<Element> image)
      : source_(std::move(source)), target_(std::move(target)), image_(std::move(image)) {}

  const FiniteGroup& source() const noexcept { return source_; }
  const FiniteGroup& target() const noexcept { return target_; }
  const std::vector<Element>& image() const noexcept { return image_; }
  Element operator()(Element a) const noexcept { return image_[a]; }

  bool is_injective() const {
    std::vector<char> hit(target_.order());
    for (Element x : image_) {
      if (hit[x]) return false;
      hit[x] = 1;
    }
    return true;
  }
  bool is_bijective() const { return source_.order() == target_.order() && is_injective(); }

  std::vector<Element> kernel() const {
    std::vector<Element> k;
    for (Element a = 0; a < source_.order(); ++a)
      if (image_[a] == target_.identity()) k.push_back(a);
    return k;
  }

  friend bool operator==(const GroupHom& a, const GroupHom& b) {
    return a.image_ == b.image_ && a.source_ == b.source_ && a.target_ == b.target_;
  }

 private:
  FiniteGroup source_;
  FiniteGroup target_;
  std::vector<Element> image_;
};

inline GroupHom validate_hom(const FiniteGroup& source, const FiniteGroup& target,
                             std::vector<Element> image) {
  if (image.size() != source.order()) throw Error(Errc::ShapeMismatch, "image has wrong length");
  for (Element x : image)
    if (x >= target.order()) throw Error(Errc::InvalidArgument, "image entry out of range");
  if (image[source.identity()] != target.identity())
    throw Error(Errc::NotHomomorphism, "identity not preserved");
  for (Element a = 0; a < source.order(); ++a)
    for (Element b = 0; b < source.order(); ++b)
      if (image[source.mul(a, b)] != target.mul(image[a], image[b]))
        throw Error(Errc::NotHomomorphism, "f(ab) != f(a)f(b)",
                    {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)});
  return GroupHom(source, target, std::move(image));
}

inline GroupHom identity_hom(const FiniteGroup& g) {
  std::vector<Element> img(g.order());
  std::iota(img.begin(), img.end(), Element{0});
  return GroupHom(g, g, std::move(img));
}

inline GroupHom trivial_hom(const FiniteGroup& source, const FiniteGroup& target) {
  return GroupHom(source, target, std::vector<Element>(source.order(), target.identity()));
}

/// a∘b (apply b first).
inline GroupHom compose(const GroupHom& a, const GroupHom& b) {
  if (!(b.target() == a.source())) throw Error(Errc::ShapeMismatch, "compose: incompatible homs");
  std::vector<Element> img(b.source().order());
  for (Element x = 0; x < img.size(); ++x) img[x] = a(b(x));
  return GroupHom(b.source(), a.target(), std::move(img));
}

// ---------------------------------------------------------------------------
// Subgroups

class Subgroup {
 public:
  const FiniteGroup& parent() const noexcept { return parent_; }
  const std::vector<Element>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(Element a) const noexcept { return a < slot_.size() && slot_[a] != npos; }
  /// Position of a member in the sorted member list.
  std::size_t index_of(Element a) const {
    if (!contains(a)) throw Error(Errc::InvalidArgument, "element not in subgroup");
    return slot_[a];
  }
  Element at(std::size_t index) const noexcept { return members_[index]; }

  /// The subgroup as a group in its own right, elements relabeled by position.
  FiniteGroup as_group() const {
    Table t(size(), std::vector<Element>(size()));
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j)
        t[i][j] = slot_[parent_.mul(members_[i], members_[j])];
    return validate_group(t);
  }

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.members_ == b.members_ && a.parent_ == b.parent_;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Subgroup(FiniteGroup parent, std::vector<Element> members)
      : parent_(std::move(parent)), members_(std::move(members)), slot_(parent_.order(), npos) {
    for (std::size_t i = 0; i < members_.size(); ++i) slot_[members_[i]] = i;
  }

  FiniteGroup parent_;
  std::vector<Element> members_;
  std::vector<std::size_t> slot_;

  friend Subgroup make_subgroup(const FiniteGroup& g, std::vector<Element> members);
  friend Subgroup generate_subgroup(const FiniteGroup& g, std::span<const Element> gens);
};

inline Subgroup make_subgroup(const FiniteGroup& g, std::vector<Element> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (Element a : members)
    if (a >= g.order()) throw Error(Errc::InvalidArgument, "subgroup member out of range");
  Subgroup h(g, std::move(members));
  if (!h.contains(g.identity())) throw Error(Errc::NotSubgroup, "identity missing");
  for (Element a : h.members()) {
    if (!h.contains(g.inv(a)))
      throw Error(Errc::NotSubgroup, "not closed under inverse", {static_cast<std::int64_t>(a)});
    for (Element b : h.members())
      if (!h.contains(g.mul(a, b)))
        throw Error(Errc::NotSubgroup, "not closed under product",
                    {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)});
  }
  return h;
}

inline Subgroup generate_subgroup(const FiniteGroup& g, std::span<const Element> gens) {
  std::vector<char> in(g.order());
  std::vector<Element> members{g.identity()};
  in[g.identity()] = 1;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (Element s : gens) {
      Element x = g.mul(members[i], s);
      if (!in[x]) {
        in[x] = 1;
        members.push_back(x);
      }
    }
  std::sort(members.begin(), members.end());
  return Subgroup(g, std::move(members));
}

inline Subgroup trivial_subgroup(const FiniteGroup& g) { return generate_subgroup(g, {}); }

inline Subgroup whole_group(const FiniteGroup& g) {
  std::vector<Element> all(g.order());
  std::iota(all.begin(), all.end(), Element{0});
  return generate_subgroup(g, all);
}

inline bool is_normal(const FiniteGroup& g, const Subgroup& h) {
  for (Element x = 0; x < g.order(); ++x)
    for (Element a : h.members())
      if (!h.contains(g.conj(x, a))) return false;
  return true;
}

/// Every subgroup, sorted by (size, members).
inline std::vector<Subgroup> all_subgroups(const FiniteGroup& g) {
  std::vector<std::vector<Element>> found;
  std::vector<Subgroup> out;
  auto add = [&](Subgroup s) {
    if (std::find(found.begin(), found.end(), s.members()) != found.end()) return false;
    found.push_back(s.members());
    out.push_back(std::move(s));
    return true;
  };
  add(trivial_subgroup(g));
  for (std::size_t i = 0; i < out.size(); ++i)
    for (Element x = 0; x < g.order(); ++x) {
      if (out[i].contains(x)) continue;
      std::vector<Element> gens = out[i].members();
      gens.push_back(x);
      add(generate_subgroup(g, gens));
    }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    return a.size() != b.size() ? a.size() < b.size() : a.members() < b.members();
  });
  return out;
}

inline std::vector<Subgroup> normal_subgroups(const FiniteGroup& g) {
  std::vector<Subgroup> out;
  for (auto& s : all_subgroups(g))
    if (is_normal(g, s)) out.push_back(std::move(s));
  return out;
}

inline Subgroup commutator_subgroup(const FiniteGroup& g) {
  std::vector<Element> comms;
  for (Element a = 0; a < g.order(); ++a)
    for (Element b = 0; b < g.order(); ++b)
      comms.push_back(g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b)));
  return generate_subgroup(g, comms);
}

/// Greedy generating set: scan ids in order, keep any element outside the
/// span of those kept so far.
inline std::vector<Element> generating_set(const FiniteGroup& g) {
  std::vector<Element> gens;
  Subgroup span = trivial_subgroup(g);
  for (Element x = 0; x < g.order(); ++x) {
    if (span.contains(x)) continue;
    gens.push_back(x);
    span = generate_subgroup(g, gens);
    if (span.size() == g.order()) break;
  }
  return gens;
}

struct Quotient {
  FiniteGroup group;
  GroupHom projection;
};

/// G/N with cosets labeled in order of their least element.
inline Quotient quotient(const FiniteGroup& g, const Subgroup& n) {
  if (!is_normal(g, n)) throw Error(Errc::NotNormal, "quotient by a non-normal subgroup");
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(g.order(), unset);
  std::vector<Element> reps;
  for (Element x = 0; x < g.order(); ++x) {
    if (label[x] != unset) continue;
    for (Element m : n.members()) label[g.mul(x, m)] = reps.size();
    reps.push_back(x);
  }
  Table t(reps.size(), std::vector<Element>(reps.size()));
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = 0; j < reps.size(); ++j) t[i][j] = label[g.mul(reps[i], reps[j])];
  FiniteGroup q = validate_group(t);
  return {q, GroupHom(g, q, std::vector<Element>(label.begin(), label.end()))};
}

inline Quotient abelianization(const FiniteGroup& g) { return quotient(g, commutator_subgroup(g)); }

inline FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const std::size_t nb = b.order();
  const std::size_t n = a.order() * nb;
  Table t(n, std::vector<Element>(n));
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      t[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
  return validate_group(t);
}

/// H ⋊ Q with (h₁,q₁)(h₂,q₂) = (h₁·act(q₁)(h₂), q₁q₂). The pair (h,q) has
/// id q·|H| + h, so H×{e} occupies ids 0..|H|-1 when Q's identity is 0.
/// `act[q]` is the automorphism of H attached to q, as an image array.
inline FiniteGroup semidirect_product(const FiniteGroup& h, const FiniteGroup& q,
                                      const std::vector<std::vector<Element>>& act) {
  const std::size_t nh = h.order();
  if (act.size() != q.order()) throw Error(Errc::ShapeMismatch, "one automorphism per Q element");
  for (Element s = 0; s < q.order(); ++s) {
    try {
      GroupHom aut = validate_hom(h, h, act[s]);
      if (!aut.is_bijective()) throw Error(Errc::NotAutomorphism, "not bijective");
    } catch (const Error&) {
      throw Error(Errc::NotAutomorphism,
                  "act(" + std::to_string(s) + ") is not an automorphism of H",
                  {static_cast<std::int64_t>(s)});
    }
  }
  for (Element s = 0; s < q.order(); ++s)
    for (Element t = 0; t < q.order(); ++t)
      for (Element x = 0; x < nh; ++x)
        if (act[q.mul(s, t)][x] != act[s][act[t][x]])
          throw Error(Errc::ActionNotHomomorphic, "act(st) != act(s)act(t)",
                      {static_cast<std::int64_t>(s), static_cast<std::int64_t>(t),
                       static_cast<std::int64_t>(x)});
  const std::size_t n = nh * q.order();
  Table t(n, std::vector<Element>(n));
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      const Element h1 = a % nh, q1 = a / nh, h2 = b % nh, q2 = b / nh;
      t[a][b] = q.mul(q1, q2) * nh + h.mul(h1, act[q1][h2]);
    }
  return validate_group(t);
}

// ---------------------------------------------------------------------------
// Brute-force hom search

namespace detail {

/// Spanning tree of the Cayley graph from the identity: each non-identity
/// element x has (parent, gen) with x = parent·gens[gen].
struct CayleyTree {
  std::vector<Element> gens;
  std::vector<Element> bfs;  // identity first
  std::vector<Element> parent;
  std::vector<std::size_t> via;

  explicit CayleyTree(const FiniteGroup& g) : gens(generating_set(g)) {
    const std::size_t n = g.order();
    parent.assign(n, n);
    via.assign(n, 0);
    bfs.push_back(g.identity());
    parent[g.identity()] = g.identity();
    for (std::size_t i = 0; i < bfs.size(); ++i)
      for (std::size_t k = 0; k < gens.size(); ++k) {
        Element y = g.mul(bfs[i], gens[k]);
        if (parent[y] == n) {
          parent[y] = bfs[i];
          via[y] = k;
          bfs.push_back(y);
        }
      }
  }

  /// Extends generator images to a full map and checks it is a hom.
  std::optional<std::vector<Element>> extend(const FiniteGroup& g, const FiniteGroup& k,
                                             const std::vector<Element>& gen_images) const {
    std::vector<Element> img(g.order());
    img[g.identity()] = k.identity();
    for (std::size_t i = 1; i < bfs.size(); ++i) {
      Element x = bfs[i];
      img[x] = k.mul(img[parent[x]], gen_images[via[x]]);
    }
    for (Element x = 0; x < g.order(); ++x)
      for (std::size_t s = 0; s < gens.size(); ++s)
        if (img[g.mul(x, gens[s])] != k.mul(img[x], gen_images[s])) return std::nullopt;
    return img;
  }
};

template <class Visit>
void for_each_gen_assignment(const FiniteGroup& g, const FiniteGroup& k, const CayleyTree& tree,
                             bool bijective, const EnumOptions& opts, Visit&& visit) {
  std::vector<std::vector<Element>> choices(tree.gens.size());
  std::uint64_t space = 1;
  for (std::size_t s = 0; s < tree.gens.size(); ++s) {
    const std::size_t ord = g.element_order(tree.gens[s]);
    for (Element y = 0; y < k.order(); ++y) {
      const std::size_t oy = k.element_order(y);
      if (bijective ? oy == ord : ord % oy == 0) choices[s].push_back(y);
    }
    space *= std::max<std::size_t>(choices[s].size(), 1);
    if (space > opts.max_enum)
      throw Error(Errc::EnumerationCapExceeded, "hom search space exceeds --max-enum");
  }
  std::vector<std::size_t> pos(choices.size(), 0);
  std::vector<Element> assign(choices.size());
  for (auto& c : choices)
    if (c.empty()) return;
  while (true) {
    for (std::size_t s = 0; s < choices.size(); ++s) assign[s] = choices[s][pos[s]];
    if (!visit(assign)) return;
    std::size_t s = choices.size();
    while (s > 0) {
      --s;
      if (++pos[s] < choices[s].size()) break;
      pos[s] = 0;
      if (s == 0) return;
    }
    if (choices.empty()) return;
  }
}

}  // namespace detail

/// All homomorphisms G→K, in lexicographic order of generator images.
inline std::vector<GroupHom> enumerate_homs(const FiniteGroup& g, const FiniteGroup& k,
                                            const EnumOptions& opts = {}) {
  if (g.order() > opts.max_order)
    throw Error(Errc::EnumerationCapExceeded, "source order exceeds enumeration cap");
  detail::CayleyTree tree(g);
  std::vector<GroupHom> out;
  detail::for_each_gen_assignment(g, k, tree, false, opts, [&](const std::vector<Element>& a) {
    if (auto img = tree.extend(g, k, a)) out.emplace_back(g, k, std::move(*img));
    return true;
  });
  return out;
}

inline std::optional<GroupHom> find_isomorphism(const FiniteGroup& a, const FiniteGroup& b,
                                                const EnumOptions& opts = {}) {
  if (a.order() != b.order()) return std::nullopt;
  if (a.order() > opts.max_order)
    throw Error(Errc::EnumerationCapExceeded, "order exceeds isomorphism search cap");
  detail::CayleyTree tree(a);
  std::optional<GroupHom> found;
  detail::for_each_gen_assignment(a, b, tree, true, opts, [&](const std::vector<Element>& s) {
    if (auto img = tree.extend(a, b, s)) {
      GroupHom f(a, b, std::move(*img));
      if (f.is_bijective()) {
        found = std::move(f);
        return false;
      }
    }
    return true;
  });
  return found;
}

inline bool is_isomorphic(const FiniteGroup& a, const FiniteGroup& b, const EnumOptions& opts = {}) {
  return find_isomorphism(a, b, opts).has_value();
}

/// Aut(G) as a group: element i of `group` is `elements[i]`, and the
/// product i·j is the composite elements[i]∘elements[j].
struct AutomorphismGroup {
  FiniteGroup group;
  std::vector<GroupHom> elements;
};

inline AutomorphismGroup automorphism_group(const FiniteGroup& g, const EnumOptions& opts = {}) {
  std::vector<GroupHom> auts;
  for (auto& f : enumerate_homs(g, g, opts))
    if (f.is_bijective()) auts.push_back(std::move(f));
  // Put the identity first so that id 0 is the group identity.
  auto id = identity_hom(g);
  auto it = std::find(auts.begin(), auts.end(), id);
  std::rotate(auts.begin(), it, it + 1);
  std::sort(auts.begin() + 1, auts.end(),
            [](const GroupHom& x, const GroupHom& y) { return x.image() < y.image(); });
  const std::size_t n = auts.size();
  Table t(n, std::vector<Element>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto c = compose(auts[i], auts[j]);
      t[i][j] = static_cast<Element>(std::find(auts.begin(), auts.end(), c) - auts.begin());
    }
  return {validate_group(t), std::move(auts)};
}

}  // namespace charinv
