#include "stagedtree/onestage/onestage.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "stagedtree/tree/canonical.hpp"

namespace staged::onestage {

using algebra::Matrix;
using algebra::Polynomial;
using algebra::Rational;

namespace {

void require_one_stage(const OneStageClass& c) {
  if (!c.is_one_stage) throw NotOneStage("tree is not a one-stage tree");
}

// All exponent vectors of length k summing to total, descending lex.
void compositions(int k, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int a = total; a >= 0; --a) {
    cur.push_back(a);
    compositions(k, total - a, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> compositions(int k, int total) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  if (k == 0) return out;
  compositions(k, total, cur, out);
  return out;
}

Rational multinomial(const std::vector<int>& b) {
  mpz_class num = 1, den = 1;
  int total = 0;
  for (int x : b) {
    for (int i = 1; i <= x; ++i) {
      ++total;
      num *= total;
      den *= i;
    }
  }
  return Rational(mpz_class(num / den));
}

struct Shape {
  std::vector<Shape> kids;
  bool leaf() const { return kids.empty(); }
};

Shape parse_shape(const std::string& s, std::size_t& pos) {
  if (pos >= s.size()) throw std::invalid_argument("truncated shape");
  if (s[pos] == '.') {
    ++pos;
    return {};
  }
  if (s[pos] != '(') throw std::invalid_argument("bad shape character");
  ++pos;
  Shape out;
  while (pos < s.size() && s[pos] != ')') out.kids.push_back(parse_shape(s, pos));
  if (pos >= s.size()) throw std::invalid_argument("unbalanced shape");
  ++pos;
  if (out.kids.empty()) throw std::invalid_argument("internal vertex without children");
  return out;
}

Shape parse_shape(const std::string& s) {
  std::size_t pos = 0;
  Shape out = parse_shape(s, pos);
  if (pos != s.size()) throw std::invalid_argument("trailing characters in shape");
  return out;
}

void write_shape(const Shape& s, std::string& out) {
  if (s.leaf()) {
    out += '.';
    return;
  }
  out += '(';
  for (const auto& c : s.kids) write_shape(c, out);
  out += ')';
}

Shape permuted(const Shape& s, const std::vector<int>& perm) {
  if (s.leaf()) return s;
  Shape out;
  out.kids.resize(s.kids.size());
  for (std::size_t i = 0; i < s.kids.size(); ++i) out.kids[perm.at(i)] = permuted(s.kids[i], perm);
  return out;
}

// Shapes of height at most h (the leaf included), sorted.
std::vector<std::string> shapes_up_to(int k, int h) {
  std::vector<std::string> prev = {"."};
  for (int level = 1; level <= h; ++level) {
    std::vector<std::string> next = {"."};
    std::vector<std::size_t> idx(k, 0);
    while (true) {
      std::string s = "(";
      for (int i = 0; i < k; ++i) s += prev[idx[i]];
      s += ')';
      next.push_back(s);
      int i = k - 1;
      while (i >= 0 && ++idx[i] == prev.size()) idx[i--] = 0;
      if (i < 0) break;
    }
    std::sort(next.begin(), next.end());
    prev = std::move(next);
  }
  return prev;
}

std::vector<Vector> permuted_span(const std::vector<Vector>& span, const VeroneseBasis& basis,
                                  const std::vector<int>& perm) {
  std::vector<Vector> out;
  for (const auto& v : span) {
    Vector w(v.size(), Rational(0));
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] == 0) continue;
      std::vector<int> e(basis.k, 0);
      for (int i = 0; i < basis.k; ++i) e[perm.at(i)] = basis.monomials[j][i];
      w[basis.index_of(e)] = v[j];
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

std::size_t VeroneseBasis::index_of(const std::vector<int>& e) const {
  auto it = std::lower_bound(monomials.begin(), monomials.end(), e, std::greater<>());
  if (it == monomials.end() || *it != e) throw std::invalid_argument("not a Veronese basis monomial");
  return static_cast<std::size_t>(it - monomials.begin());
}

VeroneseBasis veronese_basis(int k, int d) { return VeroneseBasis{k, d, compositions(k, d)}; }

OneStageClass classify_onestage(const StagedTree& t) {
  OneStageClass c;
  c.d = t.depth();
  std::set<int> stages;
  std::vector<int> internal_at(t.depth() + 1, 0);
  bool maximal = true;
  for (const auto& v : t.vertices()) {
    if (v.is_leaf()) {
      if (v.depth != t.depth()) maximal = false;
      continue;
    }
    stages.insert(v.stage);
    ++internal_at[v.depth];
  }
  c.is_one_stage = stages.size() == 1 && !t.is_z_stage(*stages.begin());
  if (stages.size() == 1) c.k = static_cast<int>(t.stage(*stages.begin()).arity());
  c.is_maximal = maximal;
  c.is_caterpillar = true;
  for (int depth = 0; depth < t.depth(); ++depth)
    if (internal_at[depth] != 1) c.is_caterpillar = false;
  return c;
}

bool balanced_onestage(const StagedTree& t) {
  auto c = classify_onestage(t);
  require_one_stage(c);
  return c.is_maximal;
}

std::vector<Vector> degree_d_span(const StagedTree& t) {
  auto c = classify_onestage(t);
  require_one_stage(c);
  auto basis = veronese_basis(c.k, c.d);
  std::vector<Vector> out;
  for (int leaf : t.leaves()) {
    std::vector<int> e(c.k, 0);
    for (int w = leaf; t.vertex(w).parent >= 0; w = t.vertex(w).parent) ++e[t.vertex(w).parent_edge];
    Vector v(basis.monomials.size(), Rational(0));
    for (const auto& b : compositions(c.k, c.d - t.vertex(leaf).depth)) {
      std::vector<int> m(c.k);
      for (int i = 0; i < c.k; ++i) m[i] = e[i] + b[i];
      v[basis.index_of(m)] += multinomial(b);
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::size_t span_rank(const StagedTree& t) {
  auto span = degree_d_span(t);
  return algebra::rank_of(span, span.empty() ? 0 : span.front().size());
}

bool is_full_veronese(const StagedTree& t) {
  auto span = degree_d_span(t);
  return algebra::rank_of(span, span.front().size()) == span.front().size();
}

ToricCertificate veronese_certificate(const StagedTree& t, const minors::VerifyConfig& cfg) {
  auto c = classify_onestage(t);
  require_one_stage(c);
  const std::size_t n = t.num_leaves();
  auto basis = veronese_basis(c.k, c.d);
  const std::size_t dim = basis.monomials.size();
  auto span = degree_d_span(t);

  // Basis leaves chosen greedily from the last leaf backwards.
  std::vector<std::size_t> basis_leaves;
  std::vector<Vector> chosen;
  for (std::size_t r = n; r-- > 0;) {
    chosen.push_back(span[r]);
    if (algebra::rank_of(chosen, dim) == chosen.size()) {
      basis_leaves.push_back(r);
    } else {
      chosen.pop_back();
    }
  }
  if (basis_leaves.size() != dim) {
    ToricCertificate out;
    out.verified = false;
    out.failing_clause = "span";
    out.detail = "degree-d span has rank " + std::to_string(basis_leaves.size()) + " < " + std::to_string(dim);
    out.method = "veronese";
    return out;
  }
  std::sort(basis_leaves.begin(), basis_leaves.end());

  // Column j of V is the span vector of basis leaf j; form i solves V c = e_i
  // and so maps to Veronese monomial i.
  Matrix V(dim, dim);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < dim; ++i) V.at(i, j) = span[basis_leaves[j]][i];
  std::vector<LinearForm> forms;
  for (std::size_t i = 0; i < dim; ++i) {
    Vector e(dim, Rational(0));
    e[i] = 1;
    auto x = algebra::solve(V, e);
    LinearForm f(n);
    for (std::size_t j = 0; j < dim; ++j) f[basis_leaves[j]] = (*x)[j];
    forms.push_back(std::move(f));
  }

  // Each remaining leaf minus its expansion is a linear relation; adding the
  // form of its largest coordinate makes it map to that monomial.
  std::vector<Polynomial> J;
  const auto& pv = t.p_vars();
  for (std::size_t r = 0; r < n; ++r) {
    if (std::binary_search(basis_leaves.begin(), basis_leaves.end(), r)) continue;
    LinearForm f = LinearForm::unit(n, r);
    std::size_t top = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      f = f - forms[i] * span[r][i];
      if (span[r][i] > span[r][top]) top = i;
    }
    J.push_back(f.to_polynomial(pv));
    forms.push_back(f + forms[top]);
  }
  // Veronese quadrics: products with equal exponent sums, chained.
  std::map<std::vector<int>, std::vector<std::pair<std::size_t, std::size_t>>> by_sum;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j) {
      std::vector<int> e(c.k);
      for (int x = 0; x < c.k; ++x) e[x] = basis.monomials[i][x] + basis.monomials[j][x];
      by_sum[e].push_back({i, j});
    }
  for (const auto& [e, pairs] : by_sum)
    for (std::size_t q = 1; q < pairs.size(); ++q) {
      auto [a, b] = pairs[q - 1];
      auto [u, v] = pairs[q];
      J.push_back(forms[a].to_polynomial(pv) * forms[b].to_polynomial(pv) -
                  forms[u].to_polynomial(pv) * forms[v].to_polynomial(pv));
    }
  auto out = minors::verify_certificate(t, forms, J, cfg);
  out.method = "veronese";
  return out;
}

ToricCertificate binary_onestage_certificate(const StagedTree& t, const minors::VerifyConfig& cfg) {
  auto c = classify_onestage(t);
  require_one_stage(c);
  if (c.k != 2) throw NotOneStage("binary certificate needs a stage with two labels");
  auto out = veronese_certificate(t, cfg);
  out.method = "binary";
  return out;
}

bool algebra_equality(const StagedTree& a, const StagedTree& b, const std::optional<std::vector<int>>& perm) {
  auto ca = classify_onestage(a);
  auto cb = classify_onestage(b);
  require_one_stage(ca);
  require_one_stage(cb);
  if (ca.k != cb.k || ca.d != cb.d) throw std::invalid_argument("trees have different (k, d)");
  auto basis = veronese_basis(ca.k, ca.d);
  auto sa = degree_d_span(a);
  if (perm) sa = permuted_span(sa, basis, *perm);
  auto sb = degree_d_span(b);
  const std::size_t dim = basis.monomials.size();
  std::size_t ra = algebra::rank_of(sa, dim), rb = algebra::rank_of(sb, dim);
  if (ra != rb) return false;
  auto all = sa;
  all.insert(all.end(), sb.begin(), sb.end());
  return algebra::rank_of(all, dim) == ra;
}

std::vector<LinearForm> linear_relations(const StagedTree& t) {
  tree::Canonicalizer can(t);
  std::map<Monomial, std::size_t> rows;
  for (std::size_t r = 0; r < t.num_leaves(); ++r)
    for (const auto& [m, c] : can.atom(r).terms()) rows.emplace(m, 0);
  std::size_t k = 0;
  for (auto& [m, i] : rows) i = k++;
  Matrix A(rows.size(), t.num_leaves());
  for (std::size_t r = 0; r < t.num_leaves(); ++r)
    for (const auto& [m, c] : can.atom(r).terms()) A.at(rows[m], r) = c;
  std::vector<LinearForm> out;
  for (auto& v : algebra::null_space(A)) out.emplace_back(std::move(v));
  return out;
}

std::string shape_of(const StagedTree& t) {
  std::function<void(int, std::string&)> rec = [&](int v, std::string& out) {
    if (t.vertex(v).is_leaf()) {
      out += '.';
      return;
    }
    out += '(';
    for (int c : t.vertex(v).children) rec(c, out);
    out += ')';
  };
  std::string out;
  rec(t.root(), out);
  return out;
}

StagedTree from_shape(const std::string& shape, int k) {
  Shape s = parse_shape(shape);
  if (s.leaf()) throw std::invalid_argument("shape has no internal vertex");
  tree::TreeBuilder b;
  std::vector<std::string> labels;
  for (int i = 1; i <= k; ++i) labels.push_back("t" + std::to_string(i));
  b.stage("a", labels);
  int leaves = 0;
  std::function<std::string(const Shape&, const std::string&)> rec = [&](const Shape& x, const std::string& name) {
    if (x.leaf()) {
      std::string leaf = "p" + std::to_string(++leaves);
      b.leaf(leaf);
      return leaf;
    }
    if (static_cast<int>(x.kids.size()) != k) throw std::invalid_argument("shape arity differs from k");
    std::vector<std::string> kids;
    for (std::size_t i = 0; i < x.kids.size(); ++i)
      kids.push_back(rec(x.kids[i], (name == "r" ? "v" : name) + std::to_string(i + 1)));
    b.internal(name, "a", kids);
    return name;
  };
  rec(s, "r");
  b.root("r");
  return b.build();
}

std::string permute_shape(const std::string& shape, const std::vector<int>& perm) {
  std::string out;
  write_shape(permuted(parse_shape(shape), perm), out);
  return out;
}

std::vector<std::string> enumerate_shapes(int k, int d, bool modulo_permutation, const EnumerateConfig& cfg) {
  if (k < 1 || d < 1) throw std::invalid_argument("need k >= 1 and d >= 1");
  if (k > cfg.max_k || d > cfg.max_d)
    throw algebra::BudgetExceeded("enumeration bounds exceeded (k <= " + std::to_string(cfg.max_k) +
                                      ", d <= " + std::to_string(cfg.max_d) + ")",
                                  d);
  // f(h) = 1 + f(h-1)^k counts shapes of height at most h.
  auto count = [&](int h) {
    double f = 1;
    for (int i = 1; i <= h; ++i) f = 1 + std::pow(f, k);
    return f;
  };
  if (count(d) - count(d - 1) > static_cast<double>(cfg.max_trees))
    throw algebra::BudgetExceeded("enumeration exceeds " + std::to_string(cfg.max_trees) + " trees", d);

  auto lower = shapes_up_to(k, d - 1);
  std::set<std::string> shallow(lower.begin(), lower.end());
  std::vector<std::string> shapes;
  for (auto& s : shapes_up_to(k, d))
    if (!shallow.count(s)) shapes.push_back(std::move(s));

  std::vector<std::vector<int>> perms;
  if (modulo_permutation) {
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
  }
  std::vector<std::string> out;
  for (auto& s : shapes) {
    bool keep = true;
    for (const auto& p : perms)
      if (permute_shape(s, p) < s) {
        keep = false;
        break;
      }
    if (keep) out.push_back(std::move(s));
  }
  return out;
}

std::vector<StagedTree> enumerate_onestage(int k, int d, bool modulo_permutation, const EnumerateConfig& cfg) {
  std::vector<StagedTree> out;
  for (const auto& s : enumerate_shapes(k, d, modulo_permutation, cfg)) out.push_back(from_shape(s, k));
  return out;
}

}  // namespace staged::onestage
