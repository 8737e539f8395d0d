#include "stagedtree/balance/balance.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "stagedtree/kernel/kernel.hpp"
#include "stagedtree/tree/canonical.hpp"
#include "stagedtree/tree/ops.hpp"

namespace staged::balance {

using algebra::Monomial;
using algebra::MonomialOrder;
using algebra::VarSetPtr;

namespace {

const MonomialOrder kDrl = MonomialOrder::degrevlex();

std::vector<int> leaves_below(const StagedTree& t, int v) {
  auto [a, b] = t.leaf_range(v);
  std::vector<int> out;
  for (int r = a; r < b; ++r) out.push_back(r);
  return out;
}

Polynomial binomial(const VarSetPtr& vars, const std::vector<int>& a, const std::vector<int>& b) {
  Monomial ma(vars->size()), mb(vars->size());
  for (int r : a) ma.set(r, ma[r] + 1);
  for (int r : b) mb.set(r, mb[r] + 1);
  Polynomial f(vars, ma);
  f -= Polynomial(vars, mb);
  return f;
}

// Degree, then leading monomial descending, then text.
void sort_basis(std::vector<Polynomial>& gens) {
  std::sort(gens.begin(), gens.end(), [](const Polynomial& a, const Polynomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    int c = kDrl.compare(a.leading_monomial(kDrl), b.leading_monomial(kDrl));
    if (c != 0) return c > 0;
    return a.to_string() < b.to_string();
  });
}

std::vector<Polynomial> dedup(const std::vector<Polynomial>& in) {
  std::set<std::string> seen;
  std::vector<Polynomial> out;
  for (const auto& f : in) {
    if (f.is_zero()) continue;
    Polynomial g = normalise_sign(f);
    if (seen.insert(g.to_string()).second) out.push_back(g);
  }
  sort_basis(out);
  return out;
}

void require_balanced(const StagedTree& t) {
  auto b = is_balanced(t);
  if (!b.balanced) {
    const auto& w = *b.witness;
    throw NotBalanced("tree is not balanced: vertices '" + t.vertex(w.u).name + "' and '" + t.vertex(w.v).name +
                      "', children " + std::to_string(w.i + 1) + " and " + std::to_string(w.j + 1));
  }
}

// For every r, the largest s with the same canonical atom image.
std::vector<int> representatives(const StagedTree& t) {
  tree::Canonicalizer can(t);
  const int n = static_cast<int>(t.num_leaves());
  std::vector<int> rep(n);
  for (int r = 0; r < n; ++r) {
    rep[r] = r;
    for (int s = n - 1; s > r; --s)
      if (can.atom(r) == can.atom(s)) {
        rep[r] = s;
        break;
      }
  }
  return rep;
}

}  // namespace

Polynomial normalise_sign(const Polynomial& f) {
  return f.monic(kDrl);
}

BalanceResult is_balanced(const StagedTree& t) {
  auto polys = tree::subtree_polynomials(t);
  // A stage with one label (z included) sums to one on its own.
  const auto& vars = t.label_vars();
  std::vector<Polynomial> values;
  bool trivial = false;
  for (std::size_t x = 0; x < vars->size(); ++x) {
    int s = t.label_owner()[x].first;
    if (s < 0 || t.stage(s).arity() == 1) {
      values.push_back(Polynomial(vars, 1));
      trivial = true;
    } else {
      values.push_back(Polynomial::variable(vars, x));
    }
  }
  if (trivial)
    for (auto& p : polys) p = p.substitute(values, vars);
  for (std::size_t s = 0; s < t.stages().size(); ++s) {
    const auto& members = t.stage_vertices(static_cast<int>(s));
    const int k = static_cast<int>(t.stage(static_cast<int>(s)).arity());
    if (k < 2) continue;
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const auto& u = t.vertex(members[a]);
        const auto& v = t.vertex(members[b]);
        for (int i = 0; i < k; ++i)
          for (int j = i + 1; j < k; ++j)
            if (polys[u.children[i]] * polys[v.children[j]] != polys[u.children[j]] * polys[v.children[i]])
              return {false, BalanceWitness{members[a], members[b], i, j}};
      }
  }
  return {true, std::nullopt};
}

std::optional<ColourAuditFailure> colour_audit(const StagedTree& t) {
  auto single_stage = [&](const tree::Vertex& x) {
    for (int c : x.children)
      if (t.vertex(c).stage != t.vertex(x.children.front()).stage) return false;
    return true;
  };
  for (std::size_t s = 0; s < t.stages().size(); ++s) {
    const auto& members = t.stage_vertices(static_cast<int>(s));
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const auto& u = t.vertex(members[a]);
        const auto& v = t.vertex(members[b]);
        bool pairwise = true;
        for (std::size_t i = 0; i < u.children.size(); ++i)
          if (t.vertex(u.children[i]).stage != t.vertex(v.children[i]).stage) pairwise = false;
        if (pairwise) continue;
        if (single_stage(u) && single_stage(v)) continue;
        return ColourAuditFailure{members[a], members[b]};
      }
  }
  return std::nullopt;
}

StagedTree colour_normal_form(const StagedTree& input) {
  require_balanced(input);
  StagedTree t = tree::homogenize(input);

  // Per stage id: the colours given to the children of its first visited
  // vertex, or empty when they were all given one colour.
  std::map<std::string, std::vector<std::string>> decided;

  auto give = [&](int child, const std::string& stage_id) {
    int c = *t.find_stage(stage_id);
    if (t.vertex(child).stage == c) return;
    t = tree::swap(t, child, c);
  };

  for (int level = 0; level < t.depth(); ++level) {
    std::vector<std::string> names;
    for (const auto& x : t.vertices())
      if (x.depth == level) names.push_back(x.name);
    for (const auto& name : names) {
      int v = *t.find_vertex(name);
      const auto& x = t.vertex(v);
      if (x.is_leaf() || x.children.size() < 2) continue;
      bool all_leaves = true;
      for (int c : x.children)
        if (!t.vertex(c).is_leaf()) all_leaves = false;
      if (all_leaves) continue;

      const std::string sid = t.stage(x.stage).id;
      const int k = static_cast<int>(x.children.size());
      const int nst = static_cast<int>(t.stages().size());
      std::vector<std::vector<int>> mult(k, std::vector<int>(nst));
      for (int i = 0; i < k; ++i)
        for (int c = 0; c < nst; ++c) mult[i][c] = tree::multiplicity(t, c, x.children[i]);

      auto it = decided.find(sid);
      std::vector<std::string> colours;
      if (it != decided.end()) {
        colours = it->second;
      } else {
        // Property: each child has a colour of strictly larger multiplicity
        // than some sibling.
        bool property = true;
        for (int i = 0; i < k && property; ++i) {
          int pick = -1;
          int own = t.vertex(x.children[i]).stage;
          for (int c = 0; c < nst; ++c) {
            bool ok = false;
            for (int j = 0; j < k; ++j)
              if (mult[i][c] > mult[j][c]) ok = true;
            if (!ok) continue;
            if (pick < 0 || c == own) pick = c;
          }
          if (pick < 0) property = false;
          else colours.push_back(t.stage(pick).id);
        }
        if (!property) colours.clear();
        decided.emplace(sid, colours);
      }

      if (!colours.empty()) {
        std::vector<std::string> kids;
        for (int c : x.children) kids.push_back(t.vertex(c).name);
        for (int i = 0; i < k; ++i) give(*t.find_vertex(kids[i]), colours[i]);
        continue;
      }
      // One colour for all children: keep a shared stage if there is one,
      // otherwise the first child's stage when possible, else the first
      // stage present below every child.
      int chosen = -1;
      int first = t.vertex(x.children.front()).stage;
      bool shared = true;
      for (int c : x.children)
        if (t.vertex(c).stage != first) shared = false;
      auto covers = [&](int c) {
        for (int i = 0; i < k; ++i)
          if (mult[i][c] == 0) return false;
        return true;
      };
      if (shared || (first >= 0 && covers(first))) chosen = first;
      for (int c = 0; c < nst && chosen < 0; ++c)
        if (covers(c)) chosen = c;
      if (chosen < 0) throw NotBalanced("no common colour below '" + name + "'");
      std::vector<std::string> kids;
      for (int c : x.children) kids.push_back(t.vertex(c).name);
      std::string cid = t.stage(chosen).id;
      for (const auto& kn : kids) give(*t.find_vertex(kn), cid);
    }
  }
  return t;
}

std::vector<std::pair<int, int>> degree_one_pairs(const StagedTree& t) {
  tree::Canonicalizer can(t);
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(t.num_leaves());
  for (int r = 0; r < n; ++r)
    for (int s = r + 1; s < n; ++s)
      if (can.atom(r) == can.atom(s)) out.emplace_back(r, s);
  return out;
}

QuadraticBasis quadratic_gb(const StagedTree& t) {
  require_balanced(t);
  const auto& vars = t.p_vars();
  // Labels of one-label stages and z are 1 in the balanced identity.
  auto atoms = tree::atom_images(t);
  for (auto& m : atoms) {
    auto e = m.exponents();
    for (std::size_t x = 0; x < e.size(); ++x) {
      int st = t.label_owner()[x].first;
      if (st < 0 || t.stage(st).arity() == 1) e[x] = 0;
    }
    m = Monomial(e);
  }
  std::vector<Polynomial> gens;
  for (auto [r, s] : degree_one_pairs(t)) gens.push_back(binomial(vars, {r}, {s}));

  using Pair = std::pair<int, int>;
  auto key = [](int x, int y) { return x < y ? Pair{x, y} : Pair{y, x}; };
  for (std::size_t s = 0; s < t.stages().size(); ++s) {
    const auto& members = t.stage_vertices(static_cast<int>(s));
    const int k = static_cast<int>(t.stage(static_cast<int>(s)).arity());
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const auto& u = t.vertex(members[a]);
        const auto& v = t.vertex(members[b]);
        for (int i = 0; i < k; ++i)
          for (int j = i + 1; j < k; ++j) {
            std::map<Monomial, std::vector<Pair>> left, right;
            for (int x : leaves_below(t, u.children[i]))
              for (int y : leaves_below(t, v.children[j])) left[atoms[x] * atoms[y]].push_back(key(x, y));
            for (int x : leaves_below(t, u.children[j]))
              for (int y : leaves_below(t, v.children[i])) right[atoms[x] * atoms[y]].push_back(key(x, y));
            for (auto& [img, ls] : left) {
              auto rt = right.find(img);
              if (rt == right.end()) continue;
              auto rs = rt->second;
              std::sort(ls.begin(), ls.end());
              std::sort(rs.begin(), rs.end());
              for (std::size_t m = 0; m < std::min(ls.size(), rs.size()); ++m) {
                const Pair& A = ls[m];
                const Pair& B = rs[m];
                if (A == B) continue;
                if (A.first == B.first || A.first == B.second || A.second == B.first || A.second == B.second)
                  continue;
                gens.push_back(binomial(vars, {A.first, A.second}, {B.first, B.second}));
              }
            }
          }
      }
  }
  QuadraticBasis out;
  out.basis.vars = vars;
  out.basis.order = kDrl;
  out.basis.generators = dedup(gens);
  out.is_groebner = out.basis.generators.empty() || algebra::is_groebner(out.basis.generators, kDrl);
  return out;
}

QuadraticBasis quadratic_gb_reduced(const StagedTree& t) {
  QuadraticBasis full = quadratic_gb(t);
  auto rep = representatives(t);
  std::vector<std::string> names;
  std::vector<int> new_index(rep.size(), -1);
  for (std::size_t r = 0; r < rep.size(); ++r)
    if (rep[r] == static_cast<int>(r)) {
      new_index[r] = static_cast<int>(names.size());
      names.push_back(t.p_vars()->name(r));
    }
  VarSetPtr bar = algebra::make_varset(names);
  std::vector<Polynomial> images;
  for (std::size_t r = 0; r < rep.size(); ++r) images.push_back(Polynomial::variable(bar, new_index[rep[r]]));
  std::vector<Polynomial> gens;
  for (const auto& g : full.basis.generators)
    if (g.degree() == 2) gens.push_back(g.substitute(images, bar));
  QuadraticBasis out;
  out.basis.vars = bar;
  out.basis.order = kDrl;
  out.basis.generators = dedup(gens);
  out.is_groebner = out.basis.generators.empty() || algebra::is_groebner(out.basis.generators, kDrl);
  return out;
}

KoszulReport koszul_sufficient(const StagedTree& t) {
  if (is_balanced(t).balanced) return {true, {}};
  auto k = kernel::kernel_ideal(t);
  bool low = true;
  for (const auto& g : k.generators)
    if (g.degree() > 2) low = false;
  if (low) return {true, {}};
  return {false, kernel::minimal_generator_degrees(k)};
}

}  // namespace staged::balance
