#pragma once

// Monomial matrices on ℓ²(K) and the commutation identities between the
// translations w_l and the characters v_p.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "charinv/abelian.hpp"
#include "charinv/error.hpp"
#include "charinv/parallel.hpp"
#include "charinv/phase.hpp"

namespace charinv {

/// Row i holds its single nonzero entry `phase[i]` in column `column[i]`.
class MonomialMatrix {
 public:
  MonomialMatrix() = default;

  MonomialMatrix(std::vector<std::size_t> column, std::vector<Phase> phase)
      : column_(std::move(column)), phase_(std::move(phase)) {
    if (column_.size() != phase_.size()) throw Error(Errc::ShapeMismatch, "column and phase lengths differ");
    std::vector<char> hit(column_.size(), 0);
    for (std::size_t c : column_) {
      if (c >= column_.size() || hit[c]) throw Error(Errc::InvalidArgument, "support is not a permutation");
      hit[c] = 1;
    }
  }

  static MonomialMatrix identity(std::size_t n) {
    std::vector<std::size_t> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = i;
    return {std::move(col), std::vector<Phase>(n)};
  }

  std::size_t dimension() const noexcept { return column_.size(); }
  std::size_t column(std::size_t row) const { return column_[row]; }
  Phase phase(std::size_t row) const { return phase_[row]; }

  /// Entry (i, j); zero entries are reported as nullopt.
  std::optional<Phase> entry(std::size_t i, std::size_t j) const {
    if (column_[i] != j) return std::nullopt;
    return phase_[i];
  }

  friend MonomialMatrix operator*(const MonomialMatrix& a, const MonomialMatrix& b) {
    if (a.dimension() != b.dimension()) throw Error(Errc::ShapeMismatch, "dimension mismatch");
    std::vector<std::size_t> col(a.dimension());
    std::vector<Phase> ph(a.dimension());
    for (std::size_t i = 0; i < a.dimension(); ++i) {
      const std::size_t mid = a.column_[i];
      col[i] = b.column_[mid];
      ph[i] = phase_mul(a.phase_[i], b.phase_[mid]);
    }
    return {std::move(col), std::move(ph)};
  }

  friend MonomialMatrix operator*(const Phase& s, const MonomialMatrix& a) {
    std::vector<Phase> ph(a.dimension());
    for (std::size_t i = 0; i < a.dimension(); ++i) ph[i] = phase_mul(s, a.phase_[i]);
    return {a.column_, std::move(ph)};
  }

  /// Inverse equals the conjugate transpose.
  MonomialMatrix inverse() const {
    std::vector<std::size_t> col(dimension());
    std::vector<Phase> ph(dimension());
    for (std::size_t i = 0; i < dimension(); ++i) {
      col[column_[i]] = i;
      ph[column_[i]] = phase_conj(phase_[i]);
    }
    return {std::move(col), std::move(ph)};
  }

  friend bool operator==(const MonomialMatrix& a, const MonomialMatrix& b) {
    return a.column_ == b.column_ && a.phase_ == b.phase_;
  }

 private:
  std::vector<std::size_t> column_;
  std::vector<Phase> phase_;
};

/// (w_l ξ)(k) = ξ(l⁻¹k): the permutation δ_k ↦ δ_{lk}.
inline MonomialMatrix build_w(const AbelianGroup& k, Element l) {
  if (l >= k.order()) throw Error(Errc::InvalidArgument, "element out of range");
  std::vector<std::size_t> col(k.order());
  for (Element r = 0; r < k.order(); ++r) col[r] = k.add(r, k.neg(l));
  return {std::move(col), std::vector<Phase>(k.order(), Phase(0, k.exponent()))};
}

/// (v_p ξ)(k) = conj(⟨k,p⟩) ξ(k).
inline MonomialMatrix build_v(const AbelianGroup& k, Element p) {
  if (p >= k.order()) throw Error(Errc::InvalidArgument, "dual element out of range");
  std::vector<std::size_t> col(k.order());
  std::vector<Phase> ph(k.order());
  for (Element r = 0; r < k.order(); ++r) {
    col[r] = r;
    ph[r] = phase_conj(pairing(k, r, p));
  }
  return {std::move(col), std::move(ph)};
}

struct DualityViolation {
  Element k;  // l for the Weyl check
  Element p;
};

struct DualityReport {
  std::string check;
  std::size_t checked = 0;
  std::vector<DualityViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

namespace detail {

template <class Holds>
DualityReport duality_sweep(const AbelianGroup& k, std::string name, unsigned jobs, Holds&& holds) {
  const std::size_t n = k.order();
  std::vector<char> good(n * n, 0);
  parallel_for(n * n, jobs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) good[i] = holds(i / n, i % n) ? 1 : 0;
  });
  DualityReport rep{std::move(name), n * n, {}};
  for (std::size_t i = 0; i < n * n; ++i)
    if (!good[i]) rep.violations.push_back({i / n, i % n});
  return rep;
}

}  // namespace detail

/// w_l·v_p = ⟨l,p⟩·v_p·w_l for all l, p.
inline DualityReport check_weyl(const AbelianGroup& k, unsigned jobs = 1) {
  return detail::duality_sweep(k, "weyl", jobs, [&](Element l, Element p) {
    const auto w = build_w(k, l), v = build_v(k, p);
    return w * v == pairing(k, l, p) * (v * w);
  });
}

/// ρ_k⁻¹·v_p·ρ_k = conj(⟨k,p⟩)·v_p with ρ_k = w_k.
inline DualityReport check_second_dual(const AbelianGroup& k, unsigned jobs = 1) {
  return detail::duality_sweep(k, "second_dual", jobs, [&](Element x, Element p) {
    const auto rho = build_w(k, x), v = build_v(k, p);
    return rho.inverse() * v * rho == phase_conj(pairing(k, x, p)) * v;
  });
}

}  // namespace charinv
