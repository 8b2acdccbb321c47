#pragma once

// Named small groups used by tests, the acceptance suite and the CLI.

#include <array>
#include <string>
#include <vector>

#include "charinv/group.hpp"

namespace charinv::catalog {

inline FiniteGroup cyclic(std::size_t n) {
  if (n == 0) throw Error(Errc::InvalidArgument, "cyclic group of order 0");
  Table t(n, std::vector<Element>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return validate_group(t);
}

/// Z/n ⋊ Z/2 by inversion, order 2n. Element r^a s^b has id b·n + a.
inline FiniteGroup dihedral(std::size_t n) {
  FiniteGroup zn = cyclic(n);
  std::vector<std::vector<Element>> act(2, std::vector<Element>(n));
  for (Element a = 0; a < n; ++a) {
    act[0][a] = a;
    act[1][a] = zn.inv(a);
  }
  return semidirect_product(zn, cyclic(2), act);
}

/// Permutations of {0,1,2} in lexicographic order, composed as (p·q)(x) = p(q(x)).
inline FiniteGroup symmetric3() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  Table t(6, std::vector<Element>(6));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      std::array<int, 3> c{};
      for (int x = 0; x < 3; ++x) c[x] = perms[i][perms[j][x]];
      t[i][j] = static_cast<Element>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return validate_group(t);
}

/// ±1, ±i, ±j, ±k with ids 0..7 in that order.
inline FiniteGroup quaternion() {
  // unit product table for 1,i,j,k: sign and unit index
  constexpr int sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  constexpr int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  auto id = [](int s, int u) { return static_cast<Element>(2 * u + (s < 0 ? 1 : 0)); };
  Table t(8, std::vector<Element>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const int sa = (a % 2) ? -1 : 1, ua = a / 2;
      const int sb = (b % 2) ? -1 : 1, ub = b / 2;
      t[a][b] = id(sa * sb * sign[ua][ub], unit[ua][ub]);
    }
  return validate_group(t);
}

inline FiniteGroup abelian(std::initializer_list<std::size_t> orders) {
  FiniteGroup g;
  for (auto n : orders) g = direct_product(g, cyclic(n));
  return g;
}

struct NamedGroup {
  std::string name;
  FiniteGroup group;
};

/// One representative of every isomorphism class of order ≤ 8.
inline std::vector<NamedGroup> groups_up_to_order_8() {
  return {
      {"1", cyclic(1)},
      {"Z2", cyclic(2)},
      {"Z3", cyclic(3)},
      {"Z4", cyclic(4)},
      {"Z2xZ2", abelian({2, 2})},
      {"Z5", cyclic(5)},
      {"Z6", cyclic(6)},
      {"S3", symmetric3()},
      {"Z7", cyclic(7)},
      {"Z8", cyclic(8)},
      {"Z4xZ2", abelian({4, 2})},
      {"Z2xZ2xZ2", abelian({2, 2, 2})},
      {"D4", dihedral(4)},
      {"Q8", quaternion()},
  };
}

/// Order ≤ 6 representatives.
inline std::vector<NamedGroup> groups_up_to_order_6() {
  auto all = groups_up_to_order_8();
  std::vector<NamedGroup> out;
  for (auto& g : all)
    if (g.group.order() <= 6) out.push_back(std::move(g));
  return out;
}

}  // namespace charinv::catalog
