#include "stagedtree/tree/ops.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace staged::tree {

namespace {

// Drops unreachable vertices and unused stages, then validates.
StagedTree rebuild(const std::vector<Stage>& stages, const std::vector<Vertex>& verts, int root) {
  std::vector<int> keep_v(verts.size(), -1);
  std::vector<int> order;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    if (keep_v[u] >= 0) continue;
    keep_v[u] = static_cast<int>(order.size());
    order.push_back(u);
    for (int c : verts[u].children) stack.push_back(c);
  }
  std::vector<int> keep_s(stages.size(), -1);
  std::vector<Stage> new_stages;
  for (int u : order) {
    int s = verts[u].stage;
    if (s >= 0 && keep_s[s] < 0) {
      keep_s[s] = static_cast<int>(new_stages.size());
      new_stages.push_back(stages[s]);
    }
  }
  std::vector<Vertex> out;
  for (int u : order) {
    Vertex v;
    v.name = verts[u].name;
    v.stage = verts[u].stage < 0 ? -1 : keep_s[verts[u].stage];
    for (int c : verts[u].children) v.children.push_back(keep_v[c]);
    out.push_back(std::move(v));
  }
  return StagedTree(std::move(new_stages), std::move(out), 0);
}

class NamePool {
 public:
  explicit NamePool(const StagedTree& t) {
    for (const auto& v : t.vertices()) used_.insert(v.name);
  }
  std::string fresh(const std::string& base) {
    std::string name = base;
    for (int k = 2; !used_.insert(name).second; ++k) name = base + "_" + std::to_string(k);
    return name;
  }

 private:
  std::set<std::string> used_;
};

}  // namespace

Monomial atom_image(const StagedTree& t, std::size_t r) { return vertex_image(t, t.leaf(r)); }

std::vector<Monomial> atom_images(const StagedTree& t) {
  std::vector<Monomial> out;
  for (std::size_t r = 0; r < t.num_leaves(); ++r) out.push_back(atom_image(t, r));
  return out;
}

Monomial vertex_image(const StagedTree& t, int v) {
  Monomial m = t.path_monomial(v);
  std::size_t z = t.label_vars()->size() - 1;
  m.set(z, m[z] + t.depth() - t.vertex(v).depth);
  return m;
}

LinearForm p_bracket(const StagedTree& t, int v) {
  LinearForm f(t.num_leaves());
  auto [a, b] = t.leaf_range(v);
  for (int r = a; r < b; ++r) f[r] = 1;
  return f;
}

std::vector<Polynomial> subtree_polynomials(const StagedTree& t) {
  const auto& vars = t.label_vars();
  std::vector<Polynomial> out(t.size(), Polynomial(vars));
  for (int v = static_cast<int>(t.size()) - 1; v >= 0; --v) {
    const Vertex& x = t.vertex(v);
    if (x.is_leaf()) {
      out[v] = Polynomial(vars, 1);
      continue;
    }
    Polynomial s(vars);
    for (std::size_t i = 0; i < x.children.size(); ++i) {
      Monomial lab = Monomial::variable(vars->size(), t.label_var(t.edge_label(v, i)));
      s += out[x.children[i]].mul_monomial(lab, 1);
    }
    out[v] = std::move(s);
  }
  return out;
}

Polynomial subtree_polynomial(const StagedTree& t, int v) { return subtree_polynomials(t).at(v); }

StagedTree homogenize(const StagedTree& t) {
  bool uniform = true;
  for (int l : t.leaves())
    if (t.vertex(l).depth != t.depth()) uniform = false;
  if (uniform) return t;

  std::vector<Stage> stages = t.stages();
  int zs = t.z_stage();
  if (zs < 0) {
    zs = static_cast<int>(stages.size());
    stages.push_back(Stage{kZ, {kZ}});
  }
  std::vector<Vertex> verts = t.vertices();
  NamePool names(t);
  for (int l : t.leaves()) {
    int gap = t.depth() - t.vertex(l).depth;
    if (gap == 0) continue;
    int parent = t.vertex(l).parent;
    int slot = t.vertex(l).parent_edge;
    for (int k = 1; k <= gap; ++k) {
      Vertex z;
      z.name = names.fresh(t.vertex(l).name + "_z" + std::to_string(k));
      z.stage = zs;
      z.children = {l};
      int idx = static_cast<int>(verts.size());
      verts.push_back(z);
      verts[parent].children[slot] = idx;
      parent = idx;
      slot = 0;
    }
  }
  return rebuild(stages, verts, t.root());
}

int multiplicity(const StagedTree& t, int stage, int v) {
  const Vertex& x = t.vertex(v);
  if (x.is_leaf()) return 0;
  int best = -1;
  for (int c : x.children) {
    int m = multiplicity(t, stage, c);
    if (best < 0 || m < best) best = m;
  }
  return best + (x.stage == stage ? 1 : 0);
}

StagedTree swap(const StagedTree& t, int v, int stage) {
  const Vertex& x = t.vertex(v);
  if (stage < 0 || stage >= static_cast<int>(t.stages().size()))
    throw TreeError("swap-not-applicable", "unknown stage");
  if (x.stage == stage)
    throw TreeError("swap-not-applicable", "vertex '" + x.name + "' already has stage '" + t.stage(stage).id + "'");
  // Find a v-to-leaf path avoiding the stage, for the error message.
  std::function<std::vector<int>(int)> avoid = [&](int w) -> std::vector<int> {
    const Vertex& y = t.vertex(w);
    if (y.stage == stage) return {};
    if (y.is_leaf()) return {w};
    for (int c : y.children) {
      auto p = avoid(c);
      if (!p.empty()) {
        p.insert(p.begin(), w);
        return p;
      }
    }
    return {};
  };
  if (auto p = avoid(v); !p.empty()) {
    std::string path;
    for (int w : p) path += (path.empty() ? "" : " -> ") + t.vertex(w).name;
    throw TreeError("swap-not-applicable", "path avoids stage '" + t.stage(stage).id + "': " + path);
  }

  std::vector<Stage> stages = t.stages();
  std::vector<Vertex> verts = t.vertices();
  NamePool names(t);
  const std::size_t k = t.stage(stage).arity();
  std::function<int(int, std::size_t)> copy = [&](int w, std::size_t j) -> int {
    const Vertex& y = t.vertex(w);
    if (y.stage == stage) return y.children[j];
    Vertex n;
    n.name = names.fresh(y.name + "." + std::to_string(j + 1));
    n.stage = y.stage;
    for (int c : y.children) n.children.push_back(copy(c, j));
    verts.push_back(std::move(n));
    return static_cast<int>(verts.size()) - 1;
  };
  std::vector<int> top;
  for (std::size_t j = 0; j < k; ++j) top.push_back(copy(v, j));
  verts[v].stage = stage;
  verts[v].children = top;
  return rebuild(stages, verts, t.root());
}

ResizeResult resize(const StagedTree& t, int u) {
  const Vertex& x = t.vertex(u);
  if (x.is_leaf()) throw TreeError("resize-not-applicable", "vertex '" + x.name + "' is a leaf");
  const int s = x.stage;
  const Stage& st = t.stage(s);
  const auto& members = t.stage_vertices(s);
  const std::size_t k = st.arity();

  std::vector<int> child_stage(k);
  bool any_internal = false;
  for (std::size_t i = 0; i < k; ++i) {
    child_stage[i] = t.vertex(x.children[i]).stage;
    if (child_stage[i] >= 0) any_internal = true;
    if (child_stage[i] == s)
      throw TreeError("resize-not-applicable", "child " + std::to_string(i + 1) + " of '" + x.name +
                                                   "' is in the resized stage");
  }
  if (!any_internal) throw TreeError("resize-not-applicable", "all children of '" + x.name + "' are leaves");
  for (int v : members)
    for (std::size_t i = 0; i < k; ++i)
      if (t.vertex(t.vertex(v).children[i]).stage != child_stage[i])
        throw TreeError("resize-not-applicable", "children " + std::to_string(i + 1) + " of '" + x.name +
                                                     "' and '" + t.vertex(v).name + "' are in different stages");

  ResizeResult res{t, {}, false};
  std::set<std::string> labels;
  for (const auto& sg : t.stages())
    for (const auto& l : sg.labels) labels.insert(l);
  Stage merged{st.id, {}};
  for (std::size_t i = 0; i < k; ++i) {
    if (child_stage[i] < 0) {
      merged.labels.push_back(st.labels[i]);
      continue;
    }
    for (const auto& sigma : t.stage(child_stage[i]).labels) {
      std::string base = st.labels[i] + "_" + sigma;
      std::string name = base;
      for (int n = 2; labels.count(name); ++n) name = base + "_" + std::to_string(n);
      labels.insert(name);
      merged.labels.push_back(name);
      res.substitution.emplace(name, std::make_pair(st.labels[i], sigma));
    }
  }

  // Naive when two merged children share a stage or a child stage occurs
  // outside the merged positions.
  std::set<int> child_set;
  for (std::size_t i = 0; i < k; ++i) {
    if (child_stage[i] < 0) continue;
    if (!child_set.insert(child_stage[i]).second) res.naive = true;
  }
  for (int c : child_set) {
    for (int w : t.stage_vertices(c)) {
      const Vertex& y = t.vertex(w);
      bool merged_child = y.parent >= 0 && t.vertex(y.parent).stage == s;
      if (!merged_child) res.naive = true;
    }
  }

  std::vector<Stage> stages = t.stages();
  stages[s] = merged;
  std::vector<Vertex> verts = t.vertices();
  for (int v : members) {
    std::vector<int> kids;
    for (std::size_t i = 0; i < k; ++i) {
      int c = t.vertex(v).children[i];
      if (child_stage[i] < 0) {
        kids.push_back(c);
      } else {
        for (int g : t.vertex(c).children) kids.push_back(g);
      }
    }
    verts[v].children = kids;
  }
  res.tree = rebuild(stages, verts, t.root());
  return res;
}

Polynomial undo_resize(const Polynomial& f, const ResizeResult& r, const VarSetPtr& old_labels) {
  const auto& vars = f.vars();
  std::vector<Polynomial> images;
  for (std::size_t i = 0; i < vars->size(); ++i) {
    const std::string& name = vars->name(i);
    auto it = r.substitution.find(name);
    if (it == r.substitution.end()) {
      images.push_back(Polynomial::variable(old_labels, name));
    } else {
      images.push_back(Polynomial::variable(old_labels, it->second.first) *
                       Polynomial::variable(old_labels, it->second.second));
    }
  }
  return f.substitute(images, old_labels);
}

}  // namespace staged::tree
