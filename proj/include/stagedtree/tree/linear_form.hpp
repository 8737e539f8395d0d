#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stagedtree/algebra/polynomial.hpp"
#include "stagedtree/algebra/rational.hpp"

namespace staged::tree {

/// Rational combination of p1..pn, stored densely.
class LinearForm {
 public:
  LinearForm() = default;
  explicit LinearForm(std::size_t n) : c_(n, algebra::Rational(0)) {}
  explicit LinearForm(std::vector<algebra::Rational> coeffs) : c_(std::move(coeffs)) {}
  static LinearForm unit(std::size_t n, std::size_t r);

  std::size_t size() const { return c_.size(); }
  const algebra::Rational& operator[](std::size_t i) const { return c_[i]; }
  algebra::Rational& operator[](std::size_t i) { return c_[i]; }
  const std::vector<algebra::Rational>& coefficients() const { return c_; }
  bool is_zero() const;

  LinearForm operator+(const LinearForm& o) const;
  LinearForm operator-(const LinearForm& o) const;
  LinearForm operator*(const algebra::Rational& a) const;
  bool operator==(const LinearForm& o) const { return c_ == o.c_; }
  bool operator!=(const LinearForm& o) const { return c_ != o.c_; }
  bool operator<(const LinearForm& o) const { return c_ < o.c_; }

  algebra::Polynomial to_polynomial(const algebra::VarSetPtr& pvars) const;
  /// "p1 + p2 - 2*p3" (variables named p1..pn).
  std::string to_string() const;

 private:
  std::vector<algebra::Rational> c_;
};

/// Inverse of to_polynomial; the polynomial must be linear and homogeneous.
LinearForm linear_form_of(const algebra::Polynomial& f);

}  // namespace staged::tree
