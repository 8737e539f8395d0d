#pragma once

#include <cstddef>
#include <string>

#include "stagedtree/algebra/monomial.hpp"

namespace staged::algebra {

/// Monomial orders. Variable 0 is the largest variable in every kind.
///
/// Block(m) splits the variables into the first m (eliminated) and the rest;
/// each block is compared by DegRevLex, the eliminated block first.
class MonomialOrder {
 public:
  enum class Kind { DegRevLex, Lex, Block };

  static MonomialOrder degrevlex() { return MonomialOrder(Kind::DegRevLex, 0); }
  static MonomialOrder lex() { return MonomialOrder(Kind::Lex, 0); }
  static MonomialOrder block(std::size_t prefix) { return MonomialOrder(Kind::Block, prefix); }

  Kind kind() const { return kind_; }
  std::size_t prefix() const { return prefix_; }

  /// -1 if a < b, 0 if equal, 1 if a > b.
  int compare(const Monomial& a, const Monomial& b) const;
  bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

  std::string describe() const;

  bool operator==(const MonomialOrder& o) const { return kind_ == o.kind_ && prefix_ == o.prefix_; }

 private:
  MonomialOrder(Kind k, std::size_t prefix) : kind_(k), prefix_(prefix) {}

  Kind kind_;
  std::size_t prefix_;
};

/// DegRevLex on the full exponent vectors. Throws StructuralError when the
/// lengths differ.
int degrevlex_compare(const Monomial& a, const Monomial& b);

}  // namespace staged::algebra
