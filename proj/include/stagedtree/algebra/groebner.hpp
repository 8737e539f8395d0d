#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stagedtree/algebra/order.hpp"
#include "stagedtree/algebra/polynomial.hpp"

namespace staged::algebra {

/// Limits for Buchberger runs. Exceeding one throws BudgetExceeded.
struct Budget {
  std::size_t max_basis = 5000;
  int max_degree = 64;
  std::size_t max_terms = 20000;  // summed over the working basis
  std::size_t max_pairs = 2000000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, int degree_reached)
      : std::runtime_error(what), degree_reached_(degree_reached) {}
  int degree_reached() const { return degree_reached_; }

 private:
  int degree_reached_;
};

struct GroebnerBasis {
  VarSetPtr vars;
  std::vector<Polynomial> generators;
  MonomialOrder order = MonomialOrder::degrevlex();
  bool reduced = false;

  Polynomial normal_form(const Polynomial& f) const;
  bool contains(const Polynomial& f) const { return normal_form(f).is_zero(); }
  bool is_zero_ideal() const { return generators.empty(); }
};

/// Remainder of multivariate division, fully reduced (no term of the result
/// is divisible by a leading monomial of G). Divisors are tried in order.
Polynomial normal_form(const Polynomial& f, const std::vector<Polynomial>& G,
                       const MonomialOrder& order);

/// Reduced Gröbner basis. weights (optional, one per variable) change only
/// the pair-selection degree, which helps on weighted-homogeneous input.
GroebnerBasis buchberger(const std::vector<Polynomial>& gens, const MonomialOrder& order,
                         const Budget& budget = {}, const std::vector<int>& weights = {});

/// True when every S-pair of G reduces to zero against G.
bool is_groebner(const std::vector<Polynomial>& G, const MonomialOrder& order);

/// Generators of <gens> ∩ K[vars \ drop], expressed over the VarSet of the
/// remaining variables (original order). The result is the reduced DegRevLex
/// basis of the elimination ideal.
struct Elimination {
  VarSetPtr remaining;
  std::vector<Polynomial> generators;
};
Elimination eliminate(const std::vector<Polynomial>& gens, const std::vector<std::string>& drop,
                      const Budget& budget = {}, const std::vector<int>& weights = {});

struct BinomialCheck {
  bool binomial = true;
  std::optional<Polynomial> witness;
  GroebnerBasis basis;
};
BinomialCheck is_binomial_basis(const std::vector<Polynomial>& gens,
                                const MonomialOrder& order = MonomialOrder::degrevlex(),
                                const Budget& budget = {});

}  // namespace staged::algebra
