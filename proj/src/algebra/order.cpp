#include "stagedtree/algebra/order.hpp"

#include "stagedtree/algebra/varset.hpp"

namespace staged::algebra {

namespace {

// DegRevLex restricted to [lo, hi).
int drl_range(const Monomial& a, const Monomial& b, std::size_t lo, std::size_t hi) {
  long da = 0, db = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    da += a[i];
    db += b[i];
  }
  if (da != db) return da > db ? 1 : -1;
  for (std::size_t i = hi; i-- > lo;) {
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  }
  return 0;
}

}  // namespace

int degrevlex_compare(const Monomial& a, const Monomial& b) {
  if (a.size() != b.size()) throw StructuralError("monomials over different variable sets");
  if (a.degree() != b.degree()) return a.degree() > b.degree() ? 1 : -1;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  }
  return 0;
}

int MonomialOrder::compare(const Monomial& a, const Monomial& b) const {
  switch (kind_) {
    case Kind::DegRevLex:
      return degrevlex_compare(a, b);
    case Kind::Lex:
      if (a.size() != b.size()) throw StructuralError("monomials over different variable sets");
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
      return 0;
    case Kind::Block: {
      if (a.size() != b.size()) throw StructuralError("monomials over different variable sets");
      std::size_t p = prefix_ < a.size() ? prefix_ : a.size();
      int c = drl_range(a, b, 0, p);
      if (c != 0) return c;
      return drl_range(a, b, p, a.size());
    }
  }
  return 0;
}

std::string MonomialOrder::describe() const {
  switch (kind_) {
    case Kind::DegRevLex:
      return "degrevlex";
    case Kind::Lex:
      return "lex";
    case Kind::Block:
      return "block(" + std::to_string(prefix_) + ")";
  }
  return "";
}

}  // namespace staged::algebra
