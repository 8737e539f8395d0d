#pragma once

#include <random>
#include <string>
#include <vector>

#include "stagedtree/algebra/polynomial.hpp"

namespace testutil {

using namespace staged::algebra;

inline Polynomial P(const std::string& text, const VarSetPtr& vars) { return parse_polynomial(text, vars); }

inline std::vector<Polynomial> Ps(const std::vector<std::string>& texts, const VarSetPtr& vars) {
  std::vector<Polynomial> out;
  for (const auto& t : texts) out.push_back(P(t, vars));
  return out;
}

inline Polynomial random_poly(std::mt19937_64& rng, const VarSetPtr& vars, int max_terms, int max_deg,
                              int coef_range = 5) {
  std::uniform_int_distribution<int> nterms(0, max_terms);
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_int_distribution<int> var(0, static_cast<int>(vars->size()) - 1);
  std::uniform_int_distribution<int> num(-coef_range, coef_range);
  std::uniform_int_distribution<int> den(1, 3);
  Polynomial p(vars);
  int t = nterms(rng);
  for (int k = 0; k < t; ++k) {
    Monomial m(vars->size());
    int d = deg(rng);
    for (int j = 0; j < d; ++j) {
      int v = var(rng);
      m.set(v, m[v] + 1);
    }
    Rational c(num(rng), den(rng));
    c.canonicalize();
    p.add_term(m, c);
  }
  return p;
}

}  // namespace testutil
