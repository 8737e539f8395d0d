#include "stagedtree/tree/tree.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace staged::tree {

namespace {

std::vector<int> sorted_stage_permutation(const std::vector<Stage>& stages) {
  std::vector<int> order(stages.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    bool za = stages[a].id == kZ, zb = stages[b].id == kZ;
    if (za != zb) return zb;
    return stages[a].id < stages[b].id;
  });
  return order;
}

void check_stages(const std::vector<Stage>& stages) {
  std::set<std::string> ids;
  std::map<std::string, std::string> owner;
  for (const auto& s : stages) {
    if (s.id.empty()) throw TreeError("empty-name", "stage with empty id");
    if (!ids.insert(s.id).second) throw TreeError("duplicate-stage", "stage '" + s.id + "' declared twice");
    if (s.labels.empty()) throw TreeError("empty-stage", "stage '" + s.id + "' has no labels");
    bool is_z = s.id == kZ;
    if (is_z && (s.labels.size() != 1 || s.labels[0] != kZ))
      throw TreeError("reserved-label", "stage 'z' is reserved for the single label z");
    for (const auto& l : s.labels) {
      if (l.empty()) throw TreeError("empty-name", "empty label in stage '" + s.id + "'");
      if (l == kZ && !is_z)
        throw TreeError("reserved-label", "label 'z' is reserved (stage '" + s.id + "')");
      auto [it, fresh] = owner.emplace(l, s.id);
      if (!fresh) {
        if (it->second == s.id)
          throw TreeError("duplicate-label", "label '" + l + "' repeated in stage '" + s.id + "'");
        throw TreeError("duplicate-label",
                        "label '" + l + "' used by stages '" + it->second + "' and '" + s.id + "'");
      }
    }
  }
}

}  // namespace

StagedTree::StagedTree(std::vector<Stage> stages, std::vector<Vertex> vertices, int root) {
  check_stages(stages);
  const int nv = static_cast<int>(vertices.size());
  if (root < 0 || root >= nv) throw TreeError("missing-root", "root vertex not given");

  std::set<std::string> names;
  for (const auto& v : vertices) {
    if (v.name.empty()) throw TreeError("empty-name", "vertex with empty name");
    if (!names.insert(v.name).second) throw TreeError("duplicate-vertex", "vertex '" + v.name + "' declared twice");
  }
  for (const auto& v : vertices) {
    if (v.stage >= static_cast<int>(stages.size())) throw TreeError("undefined-stage", "vertex '" + v.name + "': bad stage");
    if (v.is_leaf()) {
      if (!v.children.empty()) throw TreeError("arity-mismatch", "leaf '" + v.name + "' has children");
      continue;
    }
    const auto& st = stages[v.stage];
    if (v.children.size() != st.arity())
      throw TreeError("arity-mismatch", "vertex '" + v.name + "' has " + std::to_string(v.children.size()) +
                                            " children but stage '" + st.id + "' has " +
                                            std::to_string(st.arity()) + " labels");
    for (int c : v.children)
      if (c < 0 || c >= nv) throw TreeError("undefined-vertex", "vertex '" + v.name + "': bad child");
  }
  if (vertices[root].is_leaf()) throw TreeError("root-is-leaf", "root '" + vertices[root].name + "' must be internal");

  std::vector<int> parent(nv, -1);
  for (int u = 0; u < nv; ++u) {
    for (int c : vertices[u].children) {
      if (c == root) throw TreeError("cycle", "edge '" + vertices[u].name + "' -> root '" + vertices[c].name + "'");
      if (parent[c] >= 0)
        throw TreeError("multiple-parents", "vertex '" + vertices[c].name + "' is a child of '" +
                                                vertices[parent[c]].name + "' and '" + vertices[u].name + "'");
      parent[c] = u;
    }
  }

  // Preorder from the root; with single parents this visits each vertex once.
  std::vector<int> order;
  std::vector<int> new_index(nv, -1);
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    new_index[u] = static_cast<int>(order.size());
    order.push_back(u);
    const auto& ch = vertices[u].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  if (static_cast<int>(order.size()) != nv) {
    for (int u = 0; u < nv; ++u) {
      if (new_index[u] >= 0) continue;
      std::set<int> seen;
      int w = u;
      while (w >= 0 && seen.insert(w).second) w = parent[w];
      if (w >= 0) throw TreeError("cycle", "cycle through vertex '" + vertices[w].name + "'");
      throw TreeError("unreachable-vertex", "vertex '" + vertices[u].name + "' is not reachable from the root");
    }
  }

  auto perm = sorted_stage_permutation(stages);
  std::vector<int> stage_new(stages.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    stages_.push_back(stages[perm[i]]);
    stage_new[perm[i]] = static_cast<int>(i);
  }
  std::vector<bool> used(stages.size(), false);

  vertices_.resize(nv);
  for (int i = 0; i < nv; ++i) {
    const Vertex& src = vertices[order[i]];
    Vertex& dst = vertices_[i];
    dst.name = src.name;
    dst.stage = src.is_leaf() ? -1 : stage_new[src.stage];
    if (!src.is_leaf()) used[src.stage] = true;
    for (int c : src.children) dst.children.push_back(new_index[c]);
  }
  for (std::size_t s = 0; s < stages.size(); ++s)
    if (!used[s]) throw TreeError("unused-stage", "stage '" + stages[s].id + "' has no vertices");

  leaf_index_.assign(nv, -1);
  leaf_range_.assign(nv, {0, 0});
  stage_vertices_.assign(stages_.size(), {});
  for (int i = 0; i < nv; ++i) {
    Vertex& v = vertices_[i];
    for (std::size_t j = 0; j < v.children.size(); ++j) {
      Vertex& c = vertices_[v.children[j]];
      c.parent = i;
      c.parent_edge = static_cast<int>(j);
      c.depth = v.depth + 1;
    }
    if (v.is_leaf()) {
      leaf_index_[i] = static_cast<int>(leaves_.size());
      leaves_.push_back(i);
      depth_ = std::max(depth_, v.depth);
    } else {
      stage_vertices_[v.stage].push_back(i);
    }
    vertex_lookup_.emplace(v.name, i);
  }
  for (int i = nv - 1; i >= 0; --i) {
    const Vertex& v = vertices_[i];
    if (v.is_leaf()) {
      leaf_range_[i] = {leaf_index_[i], leaf_index_[i] + 1};
    } else {
      leaf_range_[i] = {leaf_range_[v.children.front()].first, leaf_range_[v.children.back()].second};
    }
  }

  std::vector<std::string> label_names;
  for (std::size_t s = 0; s < stages_.size(); ++s) {
    stage_lookup_.emplace(stages_[s].id, static_cast<int>(s));
    if (stages_[s].id == kZ) {
      z_stage_ = static_cast<int>(s);
      continue;
    }
    for (std::size_t j = 0; j < stages_[s].labels.size(); ++j) {
      label_lookup_.emplace(stages_[s].labels[j], label_names.size());
      label_owner_.emplace_back(static_cast<int>(s), static_cast<int>(j));
      label_names.push_back(stages_[s].labels[j]);
    }
  }
  label_lookup_.emplace(kZ, label_names.size());
  label_owner_.emplace_back(-1, 0);
  label_names.push_back(kZ);
  label_vars_ = algebra::make_varset(std::move(label_names));
  p_vars_ = algebra::indexed_varset("p", leaves_.size());
}

std::optional<int> StagedTree::find_vertex(const std::string& name) const {
  auto it = vertex_lookup_.find(name);
  if (it == vertex_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> StagedTree::find_stage(const std::string& id) const {
  auto it = stage_lookup_.find(id);
  if (it == stage_lookup_.end()) return std::nullopt;
  return it->second;
}

const std::string& StagedTree::edge_label(int v, std::size_t i) const {
  return stages_.at(vertex(v).stage).labels.at(i);
}

const std::string& StagedTree::in_label(int v) const {
  const Vertex& x = vertex(v);
  if (x.parent < 0) throw TreeError("no-parent", "root has no incoming edge");
  return edge_label(x.parent, x.parent_edge);
}

std::size_t StagedTree::label_var(const std::string& label) const {
  auto it = label_lookup_.find(label);
  if (it == label_lookup_.end()) throw TreeError("undefined-label", "unknown label '" + label + "'");
  return it->second;
}

Monomial StagedTree::path_monomial(int v) const {
  Monomial m(label_vars_->size());
  for (int w = v; vertex(w).parent >= 0; w = vertex(w).parent) {
    std::size_t i = label_var(in_label(w));
    m.set(i, m[i] + 1);
  }
  return m;
}

TreeBuilder& TreeBuilder::stage(const std::string& id, std::vector<std::string> labels) {
  stages_.push_back(Stage{id, std::move(labels)});
  return *this;
}

TreeBuilder& TreeBuilder::internal(const std::string& name, const std::string& stage,
                                   std::vector<std::string> children) {
  decls_.push_back(Decl{name, stage, std::move(children)});
  return *this;
}

TreeBuilder& TreeBuilder::leaf(const std::string& name) {
  decls_.push_back(Decl{name, std::nullopt, {}});
  return *this;
}

TreeBuilder& TreeBuilder::root(const std::string& name) {
  root_ = name;
  return *this;
}

StagedTree TreeBuilder::build() const {
  std::map<std::string, int> vidx, sidx;
  for (std::size_t i = 0; i < stages_.size(); ++i) sidx.emplace(stages_[i].id, static_cast<int>(i));
  for (std::size_t i = 0; i < decls_.size(); ++i)
    if (!vidx.emplace(decls_[i].name, static_cast<int>(i)).second)
      throw TreeError("duplicate-vertex", "vertex '" + decls_[i].name + "' declared twice");
  std::vector<Vertex> verts(decls_.size());
  for (std::size_t i = 0; i < decls_.size(); ++i) {
    const Decl& d = decls_[i];
    verts[i].name = d.name;
    if (d.stage) {
      auto it = sidx.find(*d.stage);
      if (it == sidx.end())
        throw TreeError("undefined-stage", "vertex '" + d.name + "' uses undefined stage '" + *d.stage + "'");
      verts[i].stage = it->second;
      for (const auto& c : d.children) {
        auto jt = vidx.find(c);
        if (jt == vidx.end())
          throw TreeError("undefined-vertex", "vertex '" + d.name + "' has undefined child '" + c + "'");
        verts[i].children.push_back(jt->second);
      }
    }
  }
  if (!root_) throw TreeError("missing-root", "no root declared");
  auto it = vidx.find(*root_);
  if (it == vidx.end()) throw TreeError("undefined-vertex", "root '" + *root_ + "' is not declared");
  return StagedTree(stages_, std::move(verts), it->second);
}

}  // namespace staged::tree
