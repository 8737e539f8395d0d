#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stagedtree/algebra/groebner.hpp"
#include "stagedtree/tree/tree.hpp"

namespace staged::balance {

using algebra::GroebnerBasis;
using algebra::Polynomial;
using tree::StagedTree;

/// u and v share a stage and t(u_i) t(v_j) != t(u_j) t(v_i). Indices are
/// 0-based child positions.
struct BalanceWitness {
  int u = -1;
  int v = -1;
  int i = -1;
  int j = -1;
};

struct BalanceResult {
  bool balanced = true;
  std::optional<BalanceWitness> witness;
};

BalanceResult is_balanced(const StagedTree& t);

class NotBalanced : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Same-stage pair violating both colour conditions: children pairwise in
/// equal stages, or each vertex's children in a single stage.
struct ColourAuditFailure {
  int u = -1;
  int v = -1;
};
std::optional<ColourAuditFailure> colour_audit(const StagedTree& t);

/// Homogenises, then swaps subtrees level by level until colour_audit
/// passes. Throws NotBalanced on unbalanced input.
StagedTree colour_normal_form(const StagedTree& t);

/// Pairs (r, s), r < s, 0-based, whose atoms agree modulo the sum-to-one
/// relations.
std::vector<std::pair<int, int>> degree_one_pairs(const StagedTree& t);

struct QuadraticBasis {
  GroebnerBasis basis;
  /// Every S-pair reduces to zero (checked, not assumed).
  bool is_groebner = false;
};

/// Degree-one binomials and the quadratic binomials read off the balanced
/// identity for every same-stage pair u, v and i < j. Sign-normalised,
/// deduplicated, sorted by degree then leading monomial.
QuadraticBasis quadratic_gb(const StagedTree& t);

/// Drops p_r when a later p_s has the same image and returns the degree-two
/// binomials over the surviving variables.
QuadraticBasis quadratic_gb_reduced(const StagedTree& t);

struct KoszulReport {
  /// true: a degree-two Gröbner basis exists; false: inconclusive.
  bool sufficient = false;
  std::vector<int> minimal_degrees;  // filled when inconclusive
};
KoszulReport koszul_sufficient(const StagedTree& t);

/// Sign normalisation: leading coefficient +1 under DegRevLex.
Polynomial normalise_sign(const Polynomial& f);

}  // namespace staged::balance
