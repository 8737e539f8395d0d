#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stagedtree/tree/linear_form.hpp"
#include "stagedtree/tree/tree.hpp"

namespace staged::tree {

/// Homogenised image of p_{r+1}: path labels times z^{d - path length}.
Monomial atom_image(const StagedTree& t, std::size_t r);
std::vector<Monomial> atom_images(const StagedTree& t);

/// Image of p_[v] in the homogenised ring: root-to-v labels times
/// z^{d - depth(v)}.
Monomial vertex_image(const StagedTree& t, int v);

/// Sum of p_r over the leaves below v.
LinearForm p_bracket(const StagedTree& t, int v);

/// t(v) over label_vars(); 1 for a leaf.
Polynomial subtree_polynomial(const StagedTree& t, int v);
/// t(v) for every vertex, computed bottom-up.
std::vector<Polynomial> subtree_polynomials(const StagedTree& t);

/// Pads every short root-to-leaf path with out-degree-one z vertices placed
/// directly above the leaf.
StagedTree homogenize(const StagedTree& t);

/// mult_c(v): the least number of stage-c vertices on a v-to-leaf path.
int multiplicity(const StagedTree& t, int stage, int v);

/// Rebuilds T(v) with a root of the given stage. Throws TreeError with rule
/// "swap-not-applicable" when v already has that stage or some v-to-leaf
/// path avoids it.
StagedTree swap(const StagedTree& t, int v, int stage);

struct ResizeResult {
  StagedTree tree;
  /// new label -> (parent label, child label)
  std::map<std::string, std::pair<std::string, std::string>> substitution;
  bool naive = false;
};

/// Merges the two levels below every vertex in the stage of u. Throws
/// TreeError with rule "resize-not-applicable".
ResizeResult resize(const StagedTree& t, int u);

/// Expresses a polynomial over new labels in the old label ring by
/// substituting each product label.
Polynomial undo_resize(const Polynomial& f, const ResizeResult& r, const VarSetPtr& old_labels);

}  // namespace staged::tree
