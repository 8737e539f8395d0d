#pragma once

#include <vector>

#include "stagedtree/tree/linear_form.hpp"
#include "stagedtree/tree/tree.hpp"

namespace staged::tree {

/// Normal form modulo the homogenised sum-to-one ideal: the first label of
/// each stage is replaced by z minus the other labels of that stage. A
/// single-label stage becomes z.
class Canonicalizer {
 public:
  explicit Canonicalizer(const StagedTree& t);

  const VarSetPtr& vars() const { return vars_; }
  Polynomial reduce(const Polynomial& f) const;
  Polynomial reduce(const Monomial& m) const;
  /// Canonical image of the atom of leaf r (cached).
  const Polynomial& atom(std::size_t r) const { return atoms_.at(r); }
  /// Canonical image of a linear form in p.
  Polynomial image(const LinearForm& f) const;
  /// True if the variable is a first label (never present after reduce()).
  bool eliminated(std::size_t var) const { return eliminated_.at(var); }

 private:
  VarSetPtr vars_;
  std::vector<Polynomial> subst_;
  std::vector<bool> eliminated_;
  std::vector<Polynomial> atoms_;
};

}  // namespace staged::tree
