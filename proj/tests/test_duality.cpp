#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "charinv/duality.hpp"

using namespace charinv;

namespace {

using Dense = std::vector<std::vector<std::complex<double>>>;

std::complex<double> value(const Phase& p) {
  return std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(p.exponent()) / static_cast<double>(p.modulus()));
}

Dense dense(const MonomialMatrix& m) {
  const std::size_t n = m.dimension();
  Dense d(n, std::vector<std::complex<double>>(n));
  for (std::size_t i = 0; i < n; ++i) d[i][m.column(i)] = value(m.phase(i));
  return d;
}

Dense mul(const Dense& a, const Dense& b) {
  const std::size_t n = a.size();
  Dense c(n, std::vector<std::complex<double>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

bool close(const Dense& a, const Dense& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (std::abs(a[i][j] - b[i][j]) > 1e-9) return false;
  return true;
}

/// Characters computed straight from tuples: exp(2πi Σ x_i p_i / n_i).
std::complex<double> character(const AbelianGroup& k, Element x, Element p) {
  const auto a = k.tuple(x), b = k.tuple(p);
  double t = 0;
  for (std::size_t i = 0; i < k.rank(); ++i)
    t += static_cast<double>(a[i] * b[i] % k.cyclic_orders()[i]) / static_cast<double>(k.cyclic_orders()[i]);
  return std::polar(1.0, 2 * std::numbers::pi * t);
}

const std::vector<std::vector<std::int64_t>> kShapes = {{2}, {3}, {4}, {2, 2}, {2, 4}, {3, 3}, {6}, {2, 2, 2}};

}  // namespace

TEST(Monomial, ValidatesSupport) {
  EXPECT_THROW(MonomialMatrix({0, 0}, {Phase(0, 1), Phase(0, 1)}), Error);
  EXPECT_THROW(MonomialMatrix({0, 2}, {Phase(0, 1), Phase(0, 1)}), Error);
  EXPECT_THROW(MonomialMatrix({0}, {Phase(0, 1), Phase(0, 1)}), Error);
  auto m = MonomialMatrix({1, 0}, {Phase(1, 4), Phase(1, 2)});
  EXPECT_EQ(m * m.inverse(), MonomialMatrix::identity(2));
  EXPECT_FALSE(m.entry(0, 0).has_value());
  EXPECT_EQ(*m.entry(0, 1), Phase(1, 4));
}

TEST(Monomial, ProductMatchesDense) {
  AbelianGroup k({2, 4});
  for (Element a = 0; a < k.order(); ++a)
    for (Element b = 0; b < k.order(); ++b) {
      const auto x = build_w(k, a) * build_v(k, b);
      const auto y = build_v(k, b) * build_w(k, (a + b) % k.order());
      EXPECT_TRUE(close(dense(x * y), mul(dense(x), dense(y))));
    }
}

TEST(BuildW, Z2IsSwap) {
  AbelianGroup k({2});
  const auto w = build_w(k, 1);
  EXPECT_EQ(w.column(0), 1u);
  EXPECT_EQ(w.column(1), 0u);
  EXPECT_TRUE(w.phase(0).is_one() && w.phase(1).is_one());
  EXPECT_EQ(build_w(k, 0), MonomialMatrix::identity(2));
}

TEST(BuildW, TranslationRepresentation) {
  AbelianGroup z4({4});
  EXPECT_EQ(build_w(z4, 1) * build_w(z4, 2), build_w(z4, 3));
  for (auto& shape : kShapes) {
    AbelianGroup k(shape);
    for (Element a = 0; a < k.order(); ++a)
      for (Element b = 0; b < k.order(); ++b) EXPECT_EQ(build_w(k, a) * build_w(k, b), build_w(k, k.add(a, b)));
  }
}

TEST(BuildV, Z4Generator) {
  AbelianGroup k({4});
  const auto v = build_v(k, 1);
  const std::vector<Phase> expect{Phase(0, 4), Phase(3, 4), Phase(2, 4), Phase(1, 4)};
  for (std::size_t r = 0; r < 4; ++r) {
    EXPECT_EQ(v.column(r), r);
    EXPECT_EQ(v.phase(r), expect[r]);
  }
}

TEST(BuildV, CharacterRepresentationAndValues) {
  for (auto& shape : kShapes) {
    AbelianGroup k(shape);
    for (Element p = 0; p < k.order(); ++p) {
      const auto v = build_v(k, p);
      for (Element r = 0; r < k.order(); ++r)
        EXPECT_LT(std::abs(value(v.phase(r)) - std::conj(character(k, r, p))), 1e-9);
      for (Element q = 0; q < k.order(); ++q) EXPECT_EQ(v * build_v(k, q), build_v(k, k.add(p, q)));
    }
  }
}

TEST(BuildW, RangeChecked) {
  AbelianGroup k({3});
  EXPECT_THROW(build_w(k, 3), Error);
  EXPECT_THROW(build_v(k, 3), Error);
}

TEST(Duality, WeylRelationAgainstDenseOracle) {
  for (auto& shape : kShapes) {
    AbelianGroup k(shape);
    const auto rep = check_weyl(k);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.checked, k.order() * k.order());
    for (Element l = 0; l < k.order(); ++l)
      for (Element p = 0; p < k.order(); ++p) {
        const Dense lhs = mul(dense(build_w(k, l)), dense(build_v(k, p)));
        Dense rhs = mul(dense(build_v(k, p)), dense(build_w(k, l)));
        for (auto& row : rhs)
          for (auto& x : row) x *= character(k, l, p);
        EXPECT_TRUE(close(lhs, rhs));
      }
  }
}

TEST(Duality, SecondDual) {
  for (auto& shape : kShapes) {
    AbelianGroup k(shape);
    const auto rep = check_second_dual(k, 3);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.check, "second_dual");
  }
}

TEST(Duality, WrongScalarIsDetected) {
  // the Weyl identity with the pairing dropped fails exactly where ⟨l,p⟩ ≠ 1
  AbelianGroup k({2, 2});
  std::size_t nontrivial = 0;
  for (Element l = 0; l < k.order(); ++l)
    for (Element p = 0; p < k.order(); ++p) {
      const bool commute = build_w(k, l) * build_v(k, p) == build_v(k, p) * build_w(k, l);
      EXPECT_EQ(commute, pairing(k, l, p).is_one());
      nontrivial += commute ? 0 : 1;
    }
  EXPECT_EQ(nontrivial, 6u);
}

TEST(Duality, JobsAgree) {
  AbelianGroup k({3, 3});
  const auto a = check_weyl(k, 1), b = check_weyl(k, 5);
  EXPECT_EQ(a.checked, b.checked);
  EXPECT_EQ(a.violations.size(), b.violations.size());
}
