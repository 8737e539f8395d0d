#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stagedtree/algebra/monomial.hpp"
#include "stagedtree/algebra/polynomial.hpp"
#include "stagedtree/algebra/varset.hpp"

namespace staged::tree {

using algebra::Monomial;
using algebra::Polynomial;
using algebra::Rational;
using algebra::VarSetPtr;

/// Reserved name of the homogenising parameter and of the stage that holds
/// the inserted out-degree-one vertices.
inline const std::string kZ = "z";

/// Validation failure. rule() is a short stable identifier such as
/// "duplicate-label" or "arity-mismatch".
class TreeError : public std::invalid_argument {
 public:
  TreeError(std::string rule, const std::string& msg) : std::invalid_argument(msg), rule_(std::move(rule)) {}
  const std::string& rule() const { return rule_; }

 private:
  std::string rule_;
};

struct Stage {
  std::string id;
  std::vector<std::string> labels;
  std::size_t arity() const { return labels.size(); }
};

struct Vertex {
  std::string name;
  int stage = -1;  // -1 for leaves
  std::vector<int> children;
  int parent = -1;
  int parent_edge = -1;  // position among the parent's children
  int depth = 0;
  bool is_leaf() const { return stage < 0; }
};

/// Immutable staged tree. Stages are kept sorted by id with the reserved z
/// stage last; vertices are stored in depth-first (preorder) order so that
/// leaves appear in their numbering order.
class StagedTree {
 public:
  StagedTree(std::vector<Stage> stages, std::vector<Vertex> vertices, int root);

  const std::vector<Stage>& stages() const { return stages_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(int v) const { return vertices_.at(v); }
  const Stage& stage(int s) const { return stages_.at(s); }
  int root() const { return 0; }
  std::size_t size() const { return vertices_.size(); }

  /// Number of leaves n.
  std::size_t num_leaves() const { return leaves_.size(); }
  /// Longest root-to-leaf edge count d.
  int depth() const { return depth_; }
  /// Leaf vertex for 0-based leaf index r (p_{r+1}).
  int leaf(std::size_t r) const { return leaves_.at(r); }
  const std::vector<int>& leaves() const { return leaves_; }
  /// 0-based leaf index of a leaf vertex, -1 for internal vertices.
  int leaf_index(int v) const { return leaf_index_.at(v); }
  /// Half-open range of leaf indices below v.
  std::pair<int, int> leaf_range(int v) const { return leaf_range_.at(v); }

  std::optional<int> find_vertex(const std::string& name) const;
  std::optional<int> find_stage(const std::string& id) const;
  int z_stage() const { return z_stage_; }  // -1 when absent
  bool is_z_stage(int s) const { return s >= 0 && s == z_stage_; }

  /// Vertices of a stage in depth-first order.
  const std::vector<int>& stage_vertices(int s) const { return stage_vertices_.at(s); }
  /// Label of the i-th outgoing edge of v.
  const std::string& edge_label(int v, std::size_t i) const;
  /// Label of the edge entering v (v not the root).
  const std::string& in_label(int v) const;

  /// Parameter ring: all stage labels (stage order, label order) plus z.
  const VarSetPtr& label_vars() const { return label_vars_; }
  /// p1..pn.
  const VarSetPtr& p_vars() const { return p_vars_; }
  std::size_t label_var(const std::string& label) const;
  /// For each label variable index: (stage, position), z maps to (-1, 0).
  const std::vector<std::pair<int, int>>& label_owner() const { return label_owner_; }

  /// Product of labels on the root-to-v path (no z padding).
  Monomial path_monomial(int v) const;

 private:
  std::vector<Stage> stages_;
  std::vector<Vertex> vertices_;
  std::vector<int> leaves_;
  std::vector<int> leaf_index_;
  std::vector<std::pair<int, int>> leaf_range_;
  std::vector<std::vector<int>> stage_vertices_;
  std::map<std::string, int> vertex_lookup_;
  std::map<std::string, int> stage_lookup_;
  std::map<std::string, std::size_t> label_lookup_;
  std::vector<std::pair<int, int>> label_owner_;
  VarSetPtr label_vars_;
  VarSetPtr p_vars_;
  int depth_ = 0;
  int z_stage_ = -1;
};

/// Incremental construction by name. build() validates and renumbers.
class TreeBuilder {
 public:
  TreeBuilder& stage(const std::string& id, std::vector<std::string> labels);
  TreeBuilder& internal(const std::string& name, const std::string& stage, std::vector<std::string> children);
  TreeBuilder& leaf(const std::string& name);
  TreeBuilder& root(const std::string& name);
  StagedTree build() const;

 private:
  struct Decl {
    std::string name;
    std::optional<std::string> stage;
    std::vector<std::string> children;
  };
  std::vector<Stage> stages_;
  std::vector<Decl> decls_;
  std::optional<std::string> root_;
};

}  // namespace staged::tree
