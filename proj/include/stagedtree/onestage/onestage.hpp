#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stagedtree/algebra/linalg.hpp"
#include "stagedtree/minors/minors.hpp"
#include "stagedtree/tree/tree.hpp"

namespace staged::onestage {

using algebra::Monomial;
using algebra::Vector;
using minors::ToricCertificate;
using tree::LinearForm;
using tree::StagedTree;

class NotOneStage : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exponent vectors of θ^i with |i| = d, θ1^d first (descending lex).
struct VeroneseBasis {
  int k = 0;
  int d = 0;
  std::vector<std::vector<int>> monomials;
  std::size_t index_of(const std::vector<int>& e) const;
};

VeroneseBasis veronese_basis(int k, int d);

struct OneStageClass {
  bool is_one_stage = false;
  /// Exactly one internal vertex at each depth 0..d-1.
  bool is_caterpillar = false;
  /// Every leaf at depth d.
  bool is_maximal = false;
  int k = 0;
  int d = 0;
};

OneStageClass classify_onestage(const StagedTree& t);

/// Balanced one-stage trees are exactly the maximal ones. Throws NotOneStage.
bool balanced_onestage(const StagedTree& t);

/// Homogenised atom of each leaf with z expanded as θ1+...+θk, in the
/// coordinates of veronese_basis(k, d). Throws NotOneStage.
std::vector<Vector> degree_d_span(const StagedTree& t);
std::size_t span_rank(const StagedTree& t);
bool is_full_veronese(const StagedTree& t);

/// Forms sending p onto the Veronese basis monomials, completed by one form
/// per remaining leaf, verified with J generated by the Veronese quadrics and
/// the linear relations. Unverified with clause "span" unless the tree is
/// full Veronese. Throws NotOneStage.
ToricCertificate veronese_certificate(const StagedTree& t, const minors::VerifyConfig& cfg = {});

/// Forms sending p to the Veronese monomials of a binary one-stage tree,
/// completed by one form per remaining leaf, verified. Throws NotOneStage
/// unless the tree is one-stage with two labels.
ToricCertificate binary_onestage_certificate(const StagedTree& t, const minors::VerifyConfig& cfg = {});

/// Equal degree-d spans. perm[i] is the label of T2 that label i of T1 is
/// renamed to before comparing. Throws std::invalid_argument when (k, d)
/// differ.
bool algebra_equality(const StagedTree& a, const StagedTree& b, const std::optional<std::vector<int>>& perm = {});

/// Basis of the linear forms in ker φ_T.
std::vector<LinearForm> linear_relations(const StagedTree& t);

struct EnumerateConfig {
  int max_k = 3;
  int max_d = 5;
  std::size_t max_trees = 1000000;
};

/// Every one-stage tree of depth exactly d with labels t1..tk, in canonical
/// shape order. With modulo_permutation one representative per orbit of the
/// label permutations. Throws algebra::BudgetExceeded beyond the bounds.
std::vector<StagedTree> enumerate_onestage(int k, int d, bool modulo_permutation, const EnumerateConfig& cfg = {});
/// The shapes of enumerate_onestage without building the trees.
std::vector<std::string> enumerate_shapes(int k, int d, bool modulo_permutation, const EnumerateConfig& cfg = {});

/// Shape string: '.' for a leaf, '(' children ')' for an internal vertex.
std::string shape_of(const StagedTree& t);
/// One-stage tree with labels t1..tk from a shape string.
StagedTree from_shape(const std::string& shape, int k);
/// Shape with child positions permuted by perm at every vertex.
std::string permute_shape(const std::string& shape, const std::vector<int>& perm);

}  // namespace staged::onestage
