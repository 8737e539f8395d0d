#include "stagedtree/minors/minors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <random>
#include <set>

#include "stagedtree/algebra/linalg.hpp"
#include "stagedtree/balance/balance.hpp"
#include "stagedtree/tree/canonical.hpp"
#include "stagedtree/tree/ops.hpp"

namespace staged::minors {

using algebra::MonomialOrder;

namespace {

const MonomialOrder kDrl = MonomialOrder::degrevlex();

std::vector<Polynomial> dedup(const std::vector<Polynomial>& in) {
  std::set<std::string> seen;
  std::vector<Polynomial> out;
  for (const auto& f : in) {
    if (f.is_zero()) continue;
    Polynomial g = balance::normalise_sign(f);
    if (seen.insert(g.to_string()).second) out.push_back(g);
  }
  return out;
}

// φ(f) for f over p1..pn, in canonical form.
Polynomial canonical_image(const tree::Canonicalizer& can, const Polynomial& f) {
  std::vector<Polynomial> images;
  for (std::size_t r = 0; r < f.vars()->size(); ++r) images.push_back(can.atom(r));
  return f.substitute(images, can.vars());
}

// The scalar making the top z-degree term of a canonical image equal 1.
std::optional<Rational> monomial_scale(const Polynomial& g) {
  if (g.is_zero()) return std::nullopt;
  const std::size_t z = g.vars()->size() - 1;
  int best = -1;
  Rational c;
  for (const auto& [m, q] : g.terms()) {
    int e = static_cast<int>(m[z]);
    if (e > best) best = e, c = q;
  }
  return c;
}

ToricCertificate fail(ToricCertificate c, const std::string& clause, const std::string& detail) {
  c.verified = false;
  c.failing_clause = clause;
  c.detail = detail;
  return c;
}

}  // namespace

std::vector<Polynomial> model_invariants(const StagedTree& t) {
  const auto& pv = t.p_vars();
  std::vector<Polynomial> out;
  for (std::size_t s = 0; s < t.stages().size(); ++s) {
    const auto& members = t.stage_vertices(static_cast<int>(s));
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const auto& u = t.vertex(members[a]);
        const auto& v = t.vertex(members[b]);
        Polynomial pu = tree::p_bracket(t, members[a]).to_polynomial(pv);
        Polynomial pv_ = tree::p_bracket(t, members[b]).to_polynomial(pv);
        for (std::size_t i = 0; i < u.children.size(); ++i) {
          Polynomial ui = tree::p_bracket(t, u.children[i]).to_polynomial(pv);
          Polynomial vi = tree::p_bracket(t, v.children[i]).to_polynomial(pv);
          out.push_back(ui * pv_ - pu * vi);
        }
      }
  }
  return dedup(out);
}

StageMatrix stage_matrix(const StagedTree& t, int stage) {
  StageMatrix m;
  m.stage = stage;
  m.columns = t.stage_vertices(stage);
  std::stable_sort(m.columns.begin(), m.columns.end(),
                   [&](int a, int b) { return t.vertex(a).depth > t.vertex(b).depth; });
  const std::size_t k = t.stage(stage).arity();
  m.entries.assign(k, {});
  for (std::size_t i = 0; i < k; ++i)
    for (int u : m.columns) m.entries[i].push_back(tree::p_bracket(t, t.vertex(u).children[i]));
  return m;
}

std::vector<StageMatrix> stage_matrices(const StagedTree& t) {
  std::vector<StageMatrix> out;
  for (std::size_t s = 0; s < t.stages().size(); ++s) out.push_back(stage_matrix(t, static_cast<int>(s)));
  return out;
}

std::vector<Polynomial> matrix_minors(const StageMatrix& m, const VarSetPtr& pvars) {
  std::vector<std::vector<Polynomial>> e(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e[i].push_back(m.at(i, j).to_polynomial(pvars));
  std::vector<Polynomial> out;
  for (std::size_t i1 = 0; i1 < m.rows(); ++i1)
    for (std::size_t i2 = i1 + 1; i2 < m.rows(); ++i2)
      for (std::size_t j1 = 0; j1 < m.cols(); ++j1)
        for (std::size_t j2 = j1 + 1; j2 < m.cols(); ++j2)
          out.push_back(e[i1][j1] * e[i2][j2] - e[i1][j2] * e[i2][j1]);
  return dedup(out);
}

std::vector<Polynomial> ideal_of_minors(const StagedTree& t) {
  std::vector<Polynomial> all;
  for (const auto& m : stage_matrices(t))
    for (auto& f : matrix_minors(m, t.p_vars())) all.push_back(std::move(f));
  return dedup(all);
}

StageMatrix row_col_transform(const StageMatrix& in, const std::vector<ElementaryOp>& ops) {
  StageMatrix m = in;
  for (const auto& op : ops) {
    const bool row = op.kind == ElementaryOp::Kind::Row;
    const int lines = static_cast<int>(row ? m.rows() : m.cols());
    if (op.target < 0 || op.target >= lines || op.source < 0 || op.source >= lines)
      throw InvalidOperation("line index out of range");
    if (op.keep == 0) throw InvalidOperation("replaced line is scaled by zero");
    if (op.target == op.source) {
      if (op.keep + op.add == 0) throw InvalidOperation("line is cancelled against itself");
    }
    const int other = static_cast<int>(row ? m.cols() : m.rows());
    for (int x = 0; x < other; ++x) {
      LinearForm& dst = row ? m.at(op.target, x) : m.at(x, op.target);
      const LinearForm src = row ? m.at(op.source, x) : m.at(x, op.source);
      dst = dst * op.keep + src * op.add;
    }
  }
  return m;
}

std::optional<Monomial> monomial_representative(const StagedTree& t, const Polynomial& f) {
  if (!f.is_homogeneous()) throw std::invalid_argument("monomial_representative needs a homogeneous polynomial");
  tree::Canonicalizer can(t);
  Polynomial g = can.reduce(f.vars() == can.vars() ? f : f.rebase(can.vars()));
  if (g.is_zero()) return std::nullopt;
  const std::size_t nv = can.vars()->size();
  const std::size_t z = nv - 1;

  // Term with the largest z-degree: the eliminated first labels all became z.
  const Monomial* top = nullptr;
  int best = -1;
  bool tie = false;
  for (const auto& [m, q] : g.terms()) {
    int e = static_cast<int>(m[z]);
    if (e > best) best = e, top = &m, tie = false;
    else if (e == best) tie = true;
  }
  if (tie) return std::nullopt;
  std::vector<algebra::Monomial::Exponent> e(top->exponents());

  // First-label exponent of a stage: spread of the stage's degree over terms.
  for (std::size_t s = 0; s < t.stages().size(); ++s) {
    if (t.is_z_stage(static_cast<int>(s))) continue;
    const auto& labels = t.stage(static_cast<int>(s)).labels;
    if (labels.size() < 2) continue;
    const std::size_t first = t.label_var(labels.front());
    int lo = -1, hi = -1;
    for (const auto& [m, q] : g.terms()) {
      int d = 0;
      for (std::size_t j = 1; j < labels.size(); ++j) d += static_cast<int>(m[first + j]);
      if (lo < 0 || d < lo) lo = d;
      if (d > hi) hi = d;
    }
    int a = hi - lo;
    if (a == 0) continue;
    if (static_cast<int>(e[z]) < a) return std::nullopt;
    e[z] -= a;
    e[first] += a;
  }
  Monomial m(e);
  if (can.reduce(m) != g) return std::nullopt;
  return m;
}

std::vector<std::vector<Rational>> inverse_forms(const std::vector<LinearForm>& forms) {
  const std::size_t n = forms.size();
  algebra::Matrix a(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (forms[i].size() != n) throw std::invalid_argument("form length differs from the number of forms");
    for (std::size_t r = 0; r < n; ++r) a.at(r, i) = forms[i][r];
    a.at(i, n + i) = 1;
  }
  auto piv = algebra::rref(a);
  for (std::size_t i = 0; i < n; ++i)
    if (i >= piv.size() || piv[i] != i) throw std::invalid_argument("forms are linearly dependent");
  // With A[r][i] the coefficient of p_r in l_i, l = A^T p and so
  // p_r = sum_i A^{-1}[i][r] l_i.
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < n; ++i) inv[r][i] = a.at(i, n + r);
  return inv;
}

Polynomial to_new_variables(const Polynomial& f, const std::vector<std::vector<Rational>>& inverse,
                            const VarSetPtr& lvars) {
  std::vector<Polynomial> images;
  for (const auto& row : inverse) {
    Polynomial x(lvars);
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i] != 0) x += Polynomial::variable(lvars, i) * row[i];
    images.push_back(x);
  }
  return f.substitute(images, lvars);
}

ToricCertificate verify_certificate(const StagedTree& t, const std::vector<LinearForm>& forms,
                                    const std::vector<Polynomial>& J_gens, const VerifyConfig& cfg) {
  const std::size_t n = t.num_leaves();
  ToricCertificate c;
  c.forms = forms;
  if (forms.size() != n)
    return fail(c, "i", std::to_string(forms.size()) + " forms for " + std::to_string(n) + " variables");
  std::vector<algebra::Vector> rows;
  for (const auto& f : forms) {
    if (f.size() != n) return fail(c, "i", "form length differs from the number of leaves");
    rows.push_back(f.coefficients());
  }
  if (algebra::rank_of(rows, n) != n) return fail(c, "i", "forms are linearly dependent");

  tree::Canonicalizer can(t);
  for (std::size_t i = 0; i < n; ++i) {
    auto m = monomial_representative(t, can.image(forms[i]));
    if (!m) return fail(c, "ii", "l" + std::to_string(i + 1) + " = " + forms[i].to_string() + " has no monomial image");
    c.monomial_images.push_back(*m);
  }

  for (const auto& g : J_gens)
    if (!canonical_image(can, g).is_zero()) return fail(c, "iii", "generator not in the kernel: " + g.to_string());

  auto inv = inverse_forms(forms);
  VarSetPtr lvars = algebra::indexed_varset("l", n);
  std::vector<Polynomial> J;
  for (const auto& g : J_gens) J.push_back(to_new_variables(g, inv, lvars));
  algebra::GroebnerBasis gb;
  gb.vars = lvars;
  if (!J.empty()) gb = algebra::buchberger(J, kDrl, cfg.budget);
  for (const auto& g : gb.generators)
    if (g.size() > 2) return fail(c, "iii", "J is not binomial in the new variables: " + g.to_string());
  for (const auto& f : model_invariants(t))
    if (!gb.contains(to_new_variables(f, inv, lvars)))
      return fail(c, "iii", "model invariant outside J: " + f.to_string());
  c.binomial_generators = gb.generators;
  c.verified = true;
  return c;
}

std::vector<Polynomial> certificate_kernel(const StagedTree& t, const ToricCertificate& c,
                                           const algebra::Budget& budget) {
  const auto& lv = t.label_vars();
  const std::size_t nl = lv->size();
  const std::size_t n = c.forms.size();
  std::vector<std::string> names = lv->names();
  for (std::size_t i = 0; i < n; ++i) names.push_back("l" + std::to_string(i + 1));
  VarSetPtr ring = algebra::make_varset(names);
  std::vector<Polynomial> gens;
  int d = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<algebra::Monomial::Exponent> e(c.monomial_images[i].exponents());
    d = std::max(d, static_cast<int>(c.monomial_images[i].degree()));
    e.resize(nl + n, 0);
    gens.push_back(Polynomial::variable(ring, nl + i) - Polynomial(ring, Monomial(e)));
  }
  std::vector<int> weights(nl, 1);
  weights.resize(nl + n, std::max(d, 1));
  auto elim = algebra::eliminate(gens, lv->names(), budget, weights);
  std::vector<Polynomial> forms;
  for (const auto& f : c.forms) forms.push_back(f.to_polynomial(t.p_vars()));
  std::vector<Polynomial> out;
  for (const auto& g : elim.generators) out.push_back(g.substitute(forms, t.p_vars()));
  if (out.empty()) return out;
  return algebra::buchberger(out, kDrl, budget).generators;
}

std::vector<LinearForm> parse_forms(const std::string& text, std::size_t n) {
  std::vector<LinearForm> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto pv = algebra::indexed_varset("p", n);
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      if (line.find('p') == std::string::npos) {
        std::istringstream ls(line);
        std::vector<Rational> c;
        std::string tok;
        while (ls >> tok) c.emplace_back(algebra::parse_rational(tok));
        if (c.size() != n)
          throw std::invalid_argument(std::to_string(c.size()) + " coefficients, expected " + std::to_string(n));
        out.emplace_back(std::move(c));
      } else {
        LinearForm f = tree::linear_form_of(algebra::parse_polynomial(line, pv));
        out.push_back(f);
      }
    } catch (const std::exception& e) {
      throw std::invalid_argument("forms line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<LinearForm> load_forms(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_forms(ss.str(), n);
}

std::optional<ToricCertificate> random_search(const StagedTree& t, std::uint64_t seed, int trials,
                                              const VerifyConfig& cfg) {
  const std::size_t n = t.num_leaves();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-2, 2);
  std::uniform_int_distribution<int> nonzero(0, 3);
  const int keep_values[] = {-2, -1, 1, 2};
  tree::Canonicalizer can(t);
  const auto base = stage_matrices(t);
  const bool balanced = balance::is_balanced(t).balanced;

  for (int trial = 0; trial < trials; ++trial) {
    std::vector<StageMatrix> mats;
    for (const auto& m : base) {
      if (trial == 0) {
        mats.push_back(m);
        continue;
      }
      std::vector<ElementaryOp> ops;
      std::uniform_int_distribution<int> count(0, static_cast<int>(m.rows() + m.cols()));
      int k = count(rng);
      for (int x = 0; x < k; ++x) {
        ElementaryOp op;
        bool row = (rng() & 1) != 0;
        if (row && m.rows() < 2) row = false;
        if (!row && m.cols() < 2) continue;
        op.kind = row ? ElementaryOp::Kind::Row : ElementaryOp::Kind::Column;
        int lines = static_cast<int>(row ? m.rows() : m.cols());
        std::uniform_int_distribution<int> line(0, lines - 1);
        op.target = line(rng);
        do op.source = line(rng);
        while (op.source == op.target);
        op.keep = keep_values[nonzero(rng)];
        op.add = coef(rng);
        ops.push_back(op);
      }
      mats.push_back(row_col_transform(m, ops));
    }

    // Distinct entries, scaled so their images can be monomials.
    std::set<LinearForm> entries;
    bool ok = true;
    for (const auto& m : mats)
      for (std::size_t i = 0; i < m.rows() && ok; ++i)
        for (std::size_t j = 0; j < m.cols() && ok; ++j) {
          const LinearForm& e = m.at(i, j);
          if (e.is_zero()) continue;
          Polynomial g = can.image(e);
          auto s = monomial_scale(g);
          if (!s) {
            ok = false;
            break;
          }
          LinearForm f = e * (Rational(1) / *s);
          if (!monomial_representative(t, can.image(f))) ok = false;
          else entries.insert(f);
        }
    if (!ok) continue;
    // A root-column entry covers every leaf; leaf entries are unit forms.
    std::vector<LinearForm> forms;
    std::vector<algebra::Vector> rows;
    for (const auto& f : entries) {
      rows.push_back(f.coefficients());
      if (algebra::rank_of(rows, n) == rows.size()) forms.push_back(f);
      else rows.pop_back();
    }
    if (forms.size() != n) continue;
    std::vector<Polynomial> J;
    if (trial == 0 && balanced) {
      // The p-variables themselves, with the quadratic basis as J.
      forms.clear();
      for (std::size_t r = 0; r < n; ++r) forms.push_back(LinearForm::unit(n, r));
      J = balance::quadratic_gb(t).basis.generators;
    } else {
      for (const auto& m : mats)
        for (auto& f : matrix_minors(m, t.p_vars())) J.push_back(std::move(f));
    }
    auto c = verify_certificate(t, forms, dedup(J), cfg);
    if (c.verified) {
      c.method = "random";
      c.seed = seed;
      c.trial = trial;
      return c;
    }
  }
  return std::nullopt;
}

}  // namespace staged::minors
