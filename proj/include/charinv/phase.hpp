#pragma once

// Exact roots of unity. A Phase is exp(2πi·exponent/modulus); no floating
// point is ever involved.

#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "charinv/error.hpp"

namespace charinv {

inline constexpr std::int64_t kDefaultModulusCap = 1'000'000;

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(mod_floor(static_cast<std::int64_t>(
      (static_cast<__int128>(a) * b) % m), m));
}

inline std::int64_t checked_lcm(std::int64_t a, std::int64_t b, std::int64_t cap) {
  const std::int64_t l = std::lcm(a, b);
  if (l > cap)
    throw Error(Errc::ModulusOverflow,
                "lcm(" + std::to_string(a) + ", " + std::to_string(b) + ") exceeds modulus cap " +
                    std::to_string(cap));
  return l;
}

class Phase {
 public:
  Phase() = default;
  Phase(std::int64_t exponent, std::int64_t modulus) : modulus_(modulus) {
    if (modulus <= 0) throw Error(Errc::InvalidArgument, "phase modulus must be positive");
    exponent_ = mod_floor(exponent, modulus);
  }

  static Phase one(std::int64_t modulus = 1) { return Phase(0, modulus); }

  std::int64_t exponent() const noexcept { return exponent_; }
  std::int64_t modulus() const noexcept { return modulus_; }

  bool is_one() const noexcept { return exponent_ == 0; }

  /// Multiplicative order of the complex number.
  std::int64_t order() const noexcept { return modulus_ / std::gcd(exponent_, modulus_); }

  /// Same value written over `new_modulus`, which must be a multiple of the
  /// order of this phase.
  bool representable_at(std::int64_t new_modulus) const noexcept {
    return new_modulus > 0 && new_modulus % order() == 0;
  }

  Phase rescaled(std::int64_t new_modulus) const {
    if (!representable_at(new_modulus))
      throw Error(Errc::InvalidArgument, "phase " + to_string() + " is not a " +
                                             std::to_string(new_modulus) + "-th root of unity");
    const std::int64_t g = std::gcd(exponent_, modulus_);
    const std::int64_t num = exponent_ / g, den = modulus_ / g;
    return Phase(num * (new_modulus / den), new_modulus);
  }

  /// Lowest-terms form.
  Phase reduced() const { return rescaled(order()); }

  std::string to_string() const {
    return std::to_string(exponent_) + "/" + std::to_string(modulus_);
  }

  /// Value equality: a/m == b/n as fractions of a turn.
  friend bool operator==(const Phase& a, const Phase& b) noexcept {
    return static_cast<__int128>(a.exponent_) * b.modulus_ ==
           static_cast<__int128>(b.exponent_) * a.modulus_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Phase& p) { return os << p.to_string(); }

 private:
  std::int64_t exponent_ = 0;
  std::int64_t modulus_ = 1;
};

inline Phase phase_mul(const Phase& a, const Phase& b, std::int64_t cap = kDefaultModulusCap) {
  const std::int64_t m = checked_lcm(a.modulus(), b.modulus(), cap);
  return Phase(a.exponent() * (m / a.modulus()) + b.exponent() * (m / b.modulus()), m);
}

inline Phase phase_conj(const Phase& a) { return Phase(-a.exponent(), a.modulus()); }

inline Phase phase_pow(const Phase& a, std::int64_t e) {
  return Phase(mul_mod(a.exponent(), mod_floor(e, a.modulus()), a.modulus()), a.modulus());
}

inline Phase operator*(const Phase& a, const Phase& b) { return phase_mul(a, b); }

// ---------------------------------------------------------------------------

/// Dense table of phases over a product domain (G×H, K×K, K, ...), all
/// written over one modulus. Entries are stored as exponents.
class PhaseFunction {
 public:
  PhaseFunction() = default;

  PhaseFunction(std::vector<std::size_t> shape, std::int64_t modulus)
      : shape_(std::move(shape)), modulus_(modulus) {
    if (modulus <= 0) throw Error(Errc::InvalidArgument, "modulus must be positive");
    std::size_t n = 1;
    for (auto s : shape_) n *= s;
    exps_.assign(n, 0);
  }

  static PhaseFunction from_exponents(std::vector<std::size_t> shape, std::int64_t modulus,
                                      std::vector<std::int64_t> exps) {
    PhaseFunction f(std::move(shape), modulus);
    if (exps.size() != f.exps_.size()) throw Error(Errc::ShapeMismatch, "exponent count");
    for (auto& e : exps) e = mod_floor(e, modulus);
    f.exps_ = std::move(exps);
    return f;
  }

  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  std::int64_t modulus() const noexcept { return modulus_; }
  std::size_t size() const noexcept { return exps_.size(); }
  std::span<const std::int64_t> exponents() const noexcept { return exps_; }

  std::int64_t exponent(std::size_t i) const { return exps_[i]; }
  std::int64_t exponent(std::size_t i, std::size_t j) const { return exps_[i * shape_[1] + j]; }

  Phase at(std::size_t i) const { return Phase(exps_[i], modulus_); }
  Phase at(std::size_t i, std::size_t j) const { return Phase(exponent(i, j), modulus_); }

  void set_exponent(std::size_t i, std::int64_t e) { exps_[i] = mod_floor(e, modulus_); }
  void set_exponent(std::size_t i, std::size_t j, std::int64_t e) {
    exps_[i * shape_[1] + j] = mod_floor(e, modulus_);
  }
  void set(std::size_t i, const Phase& p) { exps_[i] = p.rescaled(modulus_).exponent(); }
  void set(std::size_t i, std::size_t j, const Phase& p) {
    exps_[i * shape_[1] + j] = p.rescaled(modulus_).exponent();
  }

  bool representable_at(std::int64_t m) const {
    for (std::size_t i = 0; i < exps_.size(); ++i)
      if (!at(i).representable_at(m)) return false;
    return true;
  }

  PhaseFunction rescaled(std::int64_t new_modulus) const {
    PhaseFunction f(shape_, new_modulus);
    for (std::size_t i = 0; i < exps_.size(); ++i) f.set(i, at(i));
    return f;
  }

  /// Value equality, entry by entry.
  friend bool operator==(const PhaseFunction& a, const PhaseFunction& b) {
    if (a.shape_ != b.shape_) return false;
    for (std::size_t i = 0; i < a.exps_.size(); ++i)
      if (!(a.at(i) == b.at(i))) return false;
    return true;
  }

 private:
  std::vector<std::size_t> shape_;
  std::int64_t modulus_ = 1;
  std::vector<std::int64_t> exps_;
};

}  // namespace charinv
