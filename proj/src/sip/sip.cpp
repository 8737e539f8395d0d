#include "stagedtree/sip/sip.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "stagedtree/algebra/linalg.hpp"
#include "stagedtree/balance/balance.hpp"
#include "stagedtree/tree/canonical.hpp"
#include "stagedtree/tree/ops.hpp"

namespace staged::sip {

using algebra::Monomial;
using algebra::Polynomial;
using algebra::Rational;

namespace {

std::string depth_suffix(int depth) { return "_d" + std::to_string(depth); }

// Preimages under the stratified map of the leaf paths in which every edge
// below the cut that sits at its stage's SIP index is replaced by z.
std::optional<std::vector<LinearForm>> sip_forms(const StagedTree& t, const std::vector<bool>& below,
                                                 const std::map<int, int>& index, std::string* why) {
  Stratified s = stratify(t);
  const StagedTree& ts = s.tree;
  const auto& lv = ts.label_vars();
  const std::size_t z = lv->size() - 1;
  const std::size_t n = t.num_leaves();

  std::vector<Monomial> targets;
  for (std::size_t r = 0; r < n; ++r) {
    Monomial m(lv->size());
    int w = t.leaf(r);
    m.set(z, t.depth() - t.vertex(w).depth);
    while (t.vertex(w).parent >= 0) {
      int p = t.vertex(w).parent;
      int j = t.vertex(w).parent_edge;
      auto it = index.find(t.vertex(p).stage);
      if (below[p] && it != index.end() && it->second == j) {
        m.set(z, m[z] + 1);
      } else {
        int ps = *ts.find_vertex(t.vertex(p).name);
        std::size_t var = ts.label_var(ts.edge_label(ps, j));
        m.set(var, m[var] + 1);
      }
      w = p;
    }
    targets.push_back(m);
  }

  tree::Canonicalizer can(ts);
  std::map<Monomial, std::size_t> rows;
  std::vector<Polynomial> goals;
  for (const auto& m : targets) goals.push_back(can.reduce(m));
  for (std::size_t r = 0; r < n; ++r)
    for (const auto& [m, c] : can.atom(r).terms()) rows.emplace(m, 0);
  for (const auto& g : goals)
    for (const auto& [m, c] : g.terms()) rows.emplace(m, 0);
  std::size_t k = 0;
  for (auto& [m, i] : rows) i = k++;
  algebra::Matrix A(rows.size(), n);
  for (std::size_t r = 0; r < n; ++r)
    for (const auto& [m, c] : can.atom(r).terms()) A.at(rows[m], r) = c;
  std::vector<LinearForm> forms;
  for (std::size_t r = 0; r < n; ++r) {
    algebra::Vector b(rows.size(), Rational(0));
    for (const auto& [m, c] : goals[r].terms()) b[rows[m]] = c;
    auto x = algebra::solve(A, b);
    if (!x) {
      if (why) *why = "path monomial of leaf " + std::to_string(r + 1) + " is not an image of a linear form";
      return std::nullopt;
    }
    forms.emplace_back(*x);
  }
  return forms;
}

ToricCertificate fail(const std::string& clause, const std::string& detail) {
  ToricCertificate c;
  c.verified = false;
  c.failing_clause = clause;
  c.detail = detail;
  return c;
}

}  // namespace

bool embeds(const StagedTree& t, int a, int b) {
  const auto& x = t.vertex(a);
  const auto& y = t.vertex(b);
  if (x.is_leaf()) return true;
  if (x.stage != y.stage) return false;
  for (std::size_t j = 0; j < x.children.size(); ++j)
    if (!embeds(t, x.children[j], y.children[j])) return false;
  return true;
}

std::optional<int> sip_index(const StagedTree& t, int stage, SipWitness* witness) {
  const int k = static_cast<int>(t.stage(stage).arity());
  const auto& members = t.stage_vertices(stage);
  for (int c = 0; c < k; ++c) {
    bool ok = true;
    for (int v : members) {
      const auto& x = t.vertex(v);
      for (int i = 0; i < k && ok; ++i) {
        if (embeds(t, x.children[c], x.children[i])) continue;
        ok = false;
        if (witness && c == 0) *witness = SipWitness{stage, v, i, c};
      }
      if (!ok) break;
    }
    if (ok) return c;
  }
  return std::nullopt;
}

std::vector<int> valid_sip_indices(const StagedTree& t, int stage) {
  std::vector<int> out;
  const int k = static_cast<int>(t.stage(stage).arity());
  for (int c = 0; c < k; ++c) {
    bool ok = true;
    for (int v : t.stage_vertices(stage))
      for (int i = 0; i < k && ok; ++i) ok = embeds(t, t.vertex(v).children[c], t.vertex(v).children[i]);
    if (ok) out.push_back(c);
  }
  return out;
}

SipResult detect_sip(const StagedTree& t) {
  SipResult r;
  for (std::size_t s = 0; s < t.stages().size(); ++s) {
    SipWitness w;
    auto i = sip_index(t, static_cast<int>(s), &w);
    if (i) {
      r.index[static_cast<int>(s)] = *i;
    } else if (r.sip) {
      r.sip = false;
      r.witness = w;
    }
  }
  return r;
}

StagedTree sip_reorder(const StagedTree& t, const SipResult& r) {
  auto order = [&](int stage) {
    std::vector<int> o;
    const int k = static_cast<int>(t.stage(stage).arity());
    auto it = r.index.find(stage);
    int first = it == r.index.end() ? 0 : it->second;
    o.push_back(first);
    for (int i = 0; i < k; ++i)
      if (i != first) o.push_back(i);
    return o;
  };
  tree::TreeBuilder b;
  for (std::size_t s = 0; s < t.stages().size(); ++s) {
    std::vector<std::string> labels;
    for (int i : order(static_cast<int>(s))) labels.push_back(t.stage(static_cast<int>(s)).labels[i]);
    b.stage(t.stage(static_cast<int>(s)).id, labels);
  }
  for (const auto& v : t.vertices()) {
    if (v.is_leaf()) {
      b.leaf(v.name);
      continue;
    }
    std::vector<std::string> kids;
    for (int i : order(v.stage)) kids.push_back(t.vertex(v.children[i]).name);
    b.internal(v.name, t.stage(v.stage).id, kids);
  }
  b.root(t.vertex(t.root()).name);
  return b.build();
}

Stratified stratify(const StagedTree& t) {
  std::set<std::pair<int, int>> seen;
  tree::TreeBuilder b;
  Stratified out{t, {}};
  for (const auto& v : t.vertices()) {
    if (v.is_leaf() || !seen.insert({v.stage, v.depth}).second) continue;
    const auto& st = t.stage(v.stage);
    std::vector<std::string> labels;
    for (const auto& l : st.labels) {
      labels.push_back(l + depth_suffix(v.depth));
      out.substitution[labels.back()] = l;
    }
    b.stage(st.id + depth_suffix(v.depth), labels);
  }
  for (const auto& v : t.vertices()) {
    if (v.is_leaf()) {
      b.leaf(v.name);
      continue;
    }
    std::vector<std::string> kids;
    for (int c : v.children) kids.push_back(t.vertex(c).name);
    b.internal(v.name, t.stage(v.stage).id + depth_suffix(v.depth), kids);
  }
  b.root(t.vertex(t.root()).name);
  out.tree = b.build();
  return out;
}

std::vector<int> depth_cut(const StagedTree& t, int k) {
  std::vector<int> out;
  for (std::size_t v = 0; v < t.size(); ++v) {
    const auto& x = t.vertex(static_cast<int>(v));
    if (x.depth == k || (x.is_leaf() && x.depth < k)) out.push_back(static_cast<int>(v));
  }
  return out;
}

ToricCertificate hybrid_certificate(const StagedTree& t, const std::vector<int>& frontier,
                                    const minors::VerifyConfig& cfg) {
  if (frontier.empty()) throw InvalidCut("empty frontier");
  std::set<int> F(frontier.begin(), frontier.end());
  if (F.size() != frontier.size()) throw InvalidCut("repeated frontier vertex");
  for (int v : frontier)
    if (v < 0 || v >= static_cast<int>(t.size())) throw InvalidCut("unknown frontier vertex");
  std::vector<bool> below(t.size(), false);
  for (std::size_t v = 0; v < t.size(); ++v) {
    int hits = 0;
    for (int w = static_cast<int>(v); w >= 0; w = t.vertex(w).parent)
      if (F.count(w)) ++hits;
    if (hits > 1) throw InvalidCut("frontier is not an antichain at '" + t.vertex(static_cast<int>(v)).name + "'");
    below[v] = hits == 1;
  }
  for (int l : t.leaves())
    if (!below[l]) throw InvalidCut("leaf '" + t.vertex(l).name + "' is not below the frontier");

  std::vector<std::string> names;
  std::vector<int> ordered(F.begin(), F.end());
  for (int v : ordered) names.push_back(t.vertex(v).name);

  std::set<int> upper, lower;
  for (std::size_t v = 0; v < t.size(); ++v) {
    const auto& x = t.vertex(static_cast<int>(v));
    if (x.is_leaf()) continue;
    (below[v] ? lower : upper).insert(x.stage);
  }
  for (int s : upper)
    if (lower.count(s)) {
      auto c = fail("hybrid-2", "stage '" + t.stage(s).id + "' occurs above and below the cut");
      c.frontier = names;
      return c;
    }
  std::map<int, int> index;
  std::map<std::string, int> index_by_id;
  for (int s : lower) {
    auto i = sip_index(t, s);
    if (!i) {
      auto c = fail("hybrid-3", "stage '" + t.stage(s).id + "' lacks the subtree-inclusion property");
      c.frontier = names;
      return c;
    }
    index[s] = *i;
    index_by_id[t.stage(s).id] = *i + 1;
  }

  // Prefix tree S with the frontier as leaves.
  std::vector<Polynomial> J;
  if (!(ordered.size() == 1 && ordered[0] == t.root())) {
    tree::TreeBuilder b;
    for (int s : upper) b.stage(t.stage(s).id, t.stage(s).labels);
    for (std::size_t v = 0; v < t.size(); ++v) {
      const auto& x = t.vertex(static_cast<int>(v));
      if (below[v] && !F.count(static_cast<int>(v))) continue;
      if (F.count(static_cast<int>(v))) {
        b.leaf(x.name);
        continue;
      }
      std::vector<std::string> kids;
      for (int c : x.children) kids.push_back(t.vertex(c).name);
      b.internal(x.name, t.stage(x.stage).id, kids);
    }
    b.root(t.vertex(t.root()).name);
    StagedTree S = b.build();
    if (!balance::is_balanced(S).balanced) {
      auto c = fail("hybrid-1", "the prefix above the cut is not balanced");
      c.frontier = names;
      return c;
    }
    std::vector<Polynomial> q;
    for (std::size_t i = 0; i < S.num_leaves(); ++i)
      q.push_back(tree::p_bracket(t, *t.find_vertex(S.vertex(S.leaf(i)).name)).to_polynomial(t.p_vars()));
    for (const auto& g : balance::quadratic_gb(S).basis.generators) J.push_back(g.substitute(q, t.p_vars()));
  }
  for (int s : lower)
    for (auto& f : minors::matrix_minors(minors::stage_matrix(t, s), t.p_vars())) J.push_back(std::move(f));

  std::string why;
  auto forms = sip_forms(t, below, index, &why);
  if (!forms) {
    auto c = fail("ii", why);
    c.frontier = names;
    return c;
  }
  auto c = minors::verify_certificate(t, *forms, J, cfg);
  c.method = "hybrid";
  c.frontier = names;
  c.sip_index = index_by_id;
  return c;
}

ToricCertificate sip_change_of_variables(const StagedTree& t, const minors::VerifyConfig& cfg) {
  auto r = detect_sip(t);
  if (!r.sip) {
    const auto& w = *r.witness;
    throw NotSip("stage '" + t.stage(w.stage).id + "' has no subtree-inclusion index (vertex '" +
                 t.vertex(w.vertex).name + "', child " + std::to_string(w.child + 1) + ")");
  }
  auto c = hybrid_certificate(t, {t.root()}, cfg);
  c.method = "sip";
  c.frontier.clear();
  return c;
}

std::optional<ToricCertificate> hybrid_search(const StagedTree& t, const minors::VerifyConfig& cfg) {
  for (int k = 0; k <= t.depth(); ++k) {
    auto c = hybrid_certificate(t, depth_cut(t, k), cfg);
    if (c.verified) return c;
  }
  return std::nullopt;
}

}  // namespace staged::sip
