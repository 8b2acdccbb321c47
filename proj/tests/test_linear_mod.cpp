#include <gtest/gtest.h>

#include <random>

#include "charinv/linear_mod.hpp"
#include "oracles.hpp"

using namespace charinv;

TEST(SolveLinearMod, WorkedExamples) {
  EXPECT_FALSE(solve_linear_mod(IntMatrix{{2}}, std::vector<std::int64_t>{1}, 2));
  EXPECT_EQ(*solve_linear_mod(IntMatrix{{2}}, std::vector<std::int64_t>{2}, 4), (std::vector<std::int64_t>{1}));
  EXPECT_EQ(*solve_linear_mod(IntMatrix{{1, 1}, {0, 2}}, std::vector<std::int64_t>{1, 2}, 4),
            (std::vector<std::int64_t>{0, 1}));
}

TEST(SolveLinearMod, EmptySystems) {
  IntMatrix none(0, 3);
  EXPECT_EQ(*solve_linear_mod(none, std::vector<std::int64_t>{}, 5), (std::vector<std::int64_t>{0, 0, 0}));
  EXPECT_EQ(solution_space(none, std::vector<std::int64_t>{}, 5)->size(), 125u);
  IntMatrix zero_cols(2, 0);
  EXPECT_TRUE(solve_linear_mod(zero_cols, std::vector<std::int64_t>{0, 0}, 3));
  EXPECT_FALSE(solve_linear_mod(zero_cols, std::vector<std::int64_t>{0, 1}, 3));
}

TEST(SolveLinearMod, RandomSystemsAgreeWithExhaustiveSearch) {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 400; ++trial) {
    const std::int64_t m = std::vector<std::int64_t>{2, 3, 4, 6, 8, 9, 12}[rng() % 7];
    const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 3;
    std::vector<std::vector<std::int64_t>> a(rows, std::vector<std::int64_t>(cols));
    IntMatrix am(rows, cols);
    std::vector<std::int64_t> b(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) am(i, j) = a[i][j] = static_cast<std::int64_t>(rng() % 25) - 12;
      b[i] = static_cast<std::int64_t>(rng() % 20) - 10;
    }
    const auto ref = oracle::all_solutions(a, b, cols, m);
    const auto lex = solve_linear_mod(am, b, m);
    const auto space = solution_space(am, b, m);
    ASSERT_EQ(lex.has_value(), !ref.empty()) << "trial " << trial;
    ASSERT_EQ(space.has_value(), !ref.empty());
    if (ref.empty()) continue;
    EXPECT_EQ(*lex, ref.front()) << "trial " << trial;
    EXPECT_EQ(space->size(), ref.size()) << "trial " << trial;
    std::vector<std::vector<std::int64_t>> listed;
    space->for_each([&](std::span<const std::int64_t> x) { listed.emplace_back(x.begin(), x.end()); });
    for (std::uint64_t i = 0; i < space->size(); ++i) EXPECT_EQ(space->at(i), listed[i]);
    std::sort(listed.begin(), listed.end());
    EXPECT_EQ(listed, ref) << "trial " << trial;
  }
}

TEST(InverseMod, Basics) {
  EXPECT_EQ(inverse_mod(3, 7), 5);
  EXPECT_EQ(inverse_mod(-1, 5), 4);
  EXPECT_THROW(inverse_mod(2, 4), Error);
}
