#include "stagedtree/tree/linear_form.hpp"

#include <stdexcept>

namespace staged::tree {

LinearForm LinearForm::unit(std::size_t n, std::size_t r) {
  LinearForm f(n);
  f.c_.at(r) = 1;
  return f;
}

bool LinearForm::is_zero() const {
  for (const auto& c : c_)
    if (c != 0) return false;
  return true;
}

LinearForm LinearForm::operator+(const LinearForm& o) const {
  if (o.size() != size()) throw std::invalid_argument("linear form length mismatch");
  LinearForm r(*this);
  for (std::size_t i = 0; i < size(); ++i) r.c_[i] += o.c_[i];
  return r;
}

LinearForm LinearForm::operator-(const LinearForm& o) const {
  if (o.size() != size()) throw std::invalid_argument("linear form length mismatch");
  LinearForm r(*this);
  for (std::size_t i = 0; i < size(); ++i) r.c_[i] -= o.c_[i];
  return r;
}

LinearForm LinearForm::operator*(const algebra::Rational& a) const {
  LinearForm r(*this);
  for (auto& c : r.c_) c *= a;
  return r;
}

algebra::Polynomial LinearForm::to_polynomial(const algebra::VarSetPtr& pvars) const {
  if (pvars->size() != size()) throw std::invalid_argument("linear form length mismatch");
  algebra::Polynomial f(pvars);
  for (std::size_t i = 0; i < size(); ++i)
    if (c_[i] != 0) f.add_term(algebra::Monomial::variable(size(), i), c_[i]);
  return f;
}

std::string LinearForm::to_string() const { return to_polynomial(algebra::indexed_varset("p", size())).to_string(); }

LinearForm linear_form_of(const algebra::Polynomial& f) {
  LinearForm r(f.vars()->size());
  for (const auto& [m, c] : f.terms()) {
    if (m.degree() != 1) throw std::invalid_argument("not a linear form: " + f.to_string());
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) r[i] = c;
  }
  return r;
}

}  // namespace staged::tree
