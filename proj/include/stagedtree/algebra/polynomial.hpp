#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stagedtree/algebra/monomial.hpp"
#include "stagedtree/algebra/order.hpp"
#include "stagedtree/algebra/rational.hpp"
#include "stagedtree/algebra/varset.hpp"

namespace staged::algebra {

/// Sparse polynomial with rational coefficients. Zero coefficients are never
/// stored. The map key order is only a storage order; use terms_sorted() for
/// a monomial-order view.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational>;

  explicit Polynomial(VarSetPtr vars);
  Polynomial(VarSetPtr vars, const Rational& c);
  Polynomial(VarSetPtr vars, const Monomial& m, const Rational& c = 1);

  static Polynomial variable(VarSetPtr vars, std::size_t index);
  static Polynomial variable(VarSetPtr vars, std::string_view name);

  const VarSetPtr& vars() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;

  Rational coefficient(const Monomial& m) const;
  void add_term(const Monomial& m, const Rational& c);

  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous() const;
  /// Homogeneous with respect to integer variable weights.
  bool is_homogeneous(const std::vector<int>& weights) const;

  std::vector<std::pair<Monomial, Rational>> terms_sorted(const MonomialOrder& order) const;
  Monomial leading_monomial(const MonomialOrder& order) const;
  Rational leading_coefficient(const MonomialOrder& order) const;
  /// Scaled so the leading coefficient is 1 (zero stays zero).
  Polynomial monic(const MonomialOrder& order) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial pow(unsigned e) const;
  Polynomial mul_monomial(const Monomial& m, const Rational& c) const;

  /// Substitutes each variable i by images[i] (all over one target VarSet).
  Polynomial substitute(const std::vector<Polynomial>& images, const VarSetPtr& target) const;
  /// Re-expresses over another VarSet containing every variable in use.
  Polynomial rebase(const VarSetPtr& target) const;

  bool operator==(const Polynomial& o) const;
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  /// Canonical text: terms in descending DegRevLex.
  std::string to_string() const;

 private:
  void check_same(const Polynomial& o) const;

  VarSetPtr vars_;
  TermMap terms_;
};

/// Parses the canonical text format ("p1*p3 - 2/3*p2^2 + 1") over vars.
/// Unknown variable names are a std::invalid_argument.
Polynomial parse_polynomial(std::string_view text, const VarSetPtr& vars);

std::string monomial_to_string(const Monomial& m, const VarSet& vars);

}  // namespace staged::algebra
