#pragma once

// Linear congruence systems A·x ≡ b (mod M).
//
// The system is diagonalized by integer elementary row and column
// operations (unimodular over Z, hence invertible mod M): D = U·A·V with D
// diagonal. Solutions are x = V·y with d_i·y_i ≡ (U·b)_i, which also gives
// the full solution set as a particular solution plus a direct sum of cyclic
// kernel generators.

#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "charinv/error.hpp"
#include "charinv/phase.hpp"

namespace charinv {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (auto& r : rows) {
      if (r.size() != cols_) throw Error(Errc::ShapeMismatch, "ragged matrix");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  /// Appends a zero row and returns its index.
  std::size_t add_row() {
    data_.resize(data_.size() + cols_, 0);
    return rows_++;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::int64_t> data_;
};

/// Modular inverse of a when gcd(a, m) = 1.
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t old_r = mod_floor(a, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(s, old_s - q * s);
  }
  if (old_r != 1 && m != 1) throw Error(Errc::InvalidArgument, "not invertible");
  return mod_floor(old_s, m);
}

struct KernelGenerator {
  std::vector<std::int64_t> vector;
  std::int64_t order;  // additive order mod M
};

/// particular + ⊕ Z/order_i · generator_i; distinct digit vectors give
/// distinct solutions.
struct SolutionSpace {
  std::int64_t modulus = 1;
  std::vector<std::int64_t> particular;
  std::vector<KernelGenerator> kernel;

  /// Number of solutions, saturating at uint64 max.
  std::uint64_t size() const noexcept {
    std::uint64_t n = 1;
    for (auto& g : kernel) {
      const auto o = static_cast<std::uint64_t>(g.order);
      if (n > std::numeric_limits<std::uint64_t>::max() / o)
        return std::numeric_limits<std::uint64_t>::max();
      n *= o;
    }
    return n;
  }

  /// The solution whose kernel digits are the mixed-radix expansion of `index`.
  std::vector<std::int64_t> at(std::uint64_t index) const {
    std::vector<std::int64_t> x = particular;
    for (auto& g : kernel) {
      const auto o = static_cast<std::uint64_t>(g.order);
      const auto d = static_cast<std::int64_t>(index % o);
      index /= o;
      for (std::size_t j = 0; j < x.size(); ++j)
        x[j] = mod_floor(x[j] + mul_mod(d, g.vector[j], modulus), modulus);
    }
    return x;
  }

  /// Visits every solution, in index order.
  template <class Visit>
  void for_each(Visit&& visit) const {
    std::vector<std::int64_t> x = particular;
    std::vector<std::int64_t> digit(kernel.size(), 0);
    while (true) {
      visit(std::span<const std::int64_t>(x));
      std::size_t i = 0;
      for (; i < kernel.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j)
          x[j] = mod_floor(x[j] + kernel[i].vector[j], modulus);
        if (++digit[i] < kernel[i].order) break;
        digit[i] = 0;  // added order·gen ≡ 0 in total
      }
      if (i == kernel.size()) return;
    }
  }
};

/// Full solution set of A·x ≡ b (mod M), or nullopt when inconsistent.
inline std::optional<SolutionSpace> solution_space(const IntMatrix& a, std::span<const std::int64_t> b,
                                                   std::int64_t m) {
  if (m <= 0) throw Error(Errc::InvalidArgument, "modulus must be positive");
  if (b.size() != a.rows()) throw Error(Errc::ShapeMismatch, "rhs length != row count");
  const std::size_t rows = a.rows(), cols = a.cols();

  std::vector<std::vector<std::int64_t>> d(rows, std::vector<std::int64_t>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) d[i][j] = mod_floor(a(i, j), m);
  std::vector<std::int64_t> c(rows);
  for (std::size_t i = 0; i < rows; ++i) c[i] = mod_floor(b[i], m);
  std::vector<std::vector<std::int64_t>> v(cols, std::vector<std::int64_t>(cols, 0));
  for (std::size_t j = 0; j < cols; ++j) v[j][j] = mod_floor(1, m);

  auto row_sub = [&](std::size_t dst, std::size_t src, std::int64_t q) {
    for (std::size_t j = 0; j < cols; ++j) d[dst][j] = mod_floor(d[dst][j] - mul_mod(q, d[src][j], m), m);
    c[dst] = mod_floor(c[dst] - mul_mod(q, c[src], m), m);
  };
  auto col_sub = [&](std::size_t dst, std::size_t src, std::int64_t q) {
    for (std::size_t i = 0; i < rows; ++i) d[i][dst] = mod_floor(d[i][dst] - mul_mod(q, d[i][src], m), m);
    for (std::size_t i = 0; i < cols; ++i) v[i][dst] = mod_floor(v[i][dst] - mul_mod(q, v[i][src], m), m);
  };
  auto row_swap = [&](std::size_t x, std::size_t y) {
    std::swap(d[x], d[y]);
    std::swap(c[x], c[y]);
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    for (auto& r : d) std::swap(r[x], r[y]);
    for (auto& r : v) std::swap(r[x], r[y]);
  };

  std::size_t rank = 0;
  for (; rank < std::min(rows, cols); ++rank) {
    const std::size_t t = rank;
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (d[i][j] != 0 && (pi == rows || d[i][j] < d[pi][pj])) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    row_swap(t, pi);
    col_swap(t, pj);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d[i][t] == 0) continue;
        row_sub(i, t, d[i][t] / d[t][t]);
        if (d[i][t] != 0) {
          row_swap(i, t);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d[t][j] == 0) continue;
        col_sub(j, t, d[t][j] / d[t][t]);
        if (d[t][j] != 0) {
          col_swap(j, t);
          clean = false;
        }
      }
    }
  }

  for (std::size_t i = rank; i < rows; ++i)
    if (c[i] != 0) return std::nullopt;

  std::vector<std::int64_t> y(cols, 0);
  std::vector<std::pair<std::size_t, std::int64_t>> free;  // (column, step) with order
  std::vector<std::int64_t> orders;
  for (std::size_t i = 0; i < rank; ++i) {
    const std::int64_t g = std::gcd(d[i][i], m);
    if (c[i] % g != 0) return std::nullopt;
    const std::int64_t mg = m / g;
    y[i] = mul_mod(c[i] / g, inverse_mod(d[i][i] / g, mg), mg);
    if (g > 1) {
      free.emplace_back(i, mg);
      orders.push_back(g);
    }
  }
  for (std::size_t j = rank; j < cols; ++j)
    if (m > 1) {
      free.emplace_back(j, 1);
      orders.push_back(m);
    }

  SolutionSpace s;
  s.modulus = m;
  s.particular.assign(cols, 0);
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      s.particular[i] = mod_floor(s.particular[i] + mul_mod(v[i][j], y[j], m), m);
  for (std::size_t f = 0; f < free.size(); ++f) {
    KernelGenerator gen{std::vector<std::int64_t>(cols), orders[f]};
    for (std::size_t i = 0; i < cols; ++i) gen.vector[i] = mul_mod(v[i][free[f].first], free[f].second, m);
    s.kernel.push_back(std::move(gen));
  }
  return s;
}

/// Lexicographically least x with A·x ≡ b (mod M), or nullopt (NoSolution).
inline std::optional<std::vector<std::int64_t>> solve_linear_mod(const IntMatrix& a,
                                                                 std::span<const std::int64_t> b,
                                                                 std::int64_t m) {
  auto space = solution_space(a, b, m);
  if (!space) return std::nullopt;
  IntMatrix aug = a;
  std::vector<std::int64_t> rhs(b.begin(), b.end());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    std::int64_t g = m;
    for (auto& gen : space->kernel) g = std::gcd(g, gen.vector[j]);
    const std::size_t r = aug.add_row();
    aug(r, j) = 1;
    rhs.push_back(space->particular[j] % g);
    space = solution_space(aug, rhs, m);
    if (!space) throw Error(Errc::InvalidArgument, "internal: lex-min refinement lost solvability");
  }
  return space->particular;
}

}  // namespace charinv
