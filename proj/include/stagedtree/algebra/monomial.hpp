#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace staged::algebra {

/// Exponent vector indexed by a VarSet. The total degree is cached.
class Monomial {
 public:
  using Exponent = std::int32_t;

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<Exponent> exps);
  Monomial(std::initializer_list<Exponent> exps) : Monomial(std::vector<Exponent>(exps)) {}

  static Monomial variable(std::size_t nvars, std::size_t index, Exponent power = 1);

  std::size_t size() const { return exps_.size(); }
  Exponent operator[](std::size_t i) const { return exps_[i]; }
  Exponent degree() const { return degree_; }
  bool is_one() const { return degree_ == 0; }
  const std::vector<Exponent>& exponents() const { return exps_; }

  void set(std::size_t i, Exponent e);

  bool divides(const Monomial& other) const;
  bool coprime(const Monomial& other) const;

  Monomial operator*(const Monomial& other) const;
  /// Requires divides(*this).
  Monomial operator/(const Monomial& divisor) const;
  Monomial lcm(const Monomial& other) const;
  Monomial gcd(const Monomial& other) const;

  bool operator==(const Monomial& other) const { return exps_ == other.exps_; }
  bool operator!=(const Monomial& other) const { return exps_ != other.exps_; }
  /// Plain lexicographic comparison of exponent vectors; only for use as a
  /// container key, not a monomial order.
  bool operator<(const Monomial& other) const { return exps_ < other.exps_; }

  std::size_t hash() const;

 private:
  std::vector<Exponent> exps_;
  Exponent degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

}  // namespace staged::algebra
