#include "stagedtree/algebra/groebner.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

namespace staged::algebra {

namespace {

struct Term {
  Monomial m;
  Rational c;
};
using TermVec = std::vector<Term>;

std::uint64_t divmask(const Monomial& m) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i] > 0) mask |= std::uint64_t(1) << (i % 64);
  return mask;
}

struct Elem {
  TermVec t;  // descending, monic
  std::uint64_t mask = 0;
  bool active = true;
  const Monomial& lm() const { return t.front().m; }
};

TermVec to_terms(const Polynomial& p, const MonomialOrder& order) {
  TermVec out;
  out.reserve(p.size());
  for (auto& [m, c] : p.terms_sorted(order)) out.push_back({m, c});
  return out;
}

Polynomial from_terms(const TermVec& t, const VarSetPtr& vars) {
  Polynomial p(vars);
  for (const auto& term : t) p.add_term(term.m, term.c);
  return p;
}

void make_monic(TermVec& t) {
  if (t.empty() || t.front().c == 1) return;
  Rational inv = 1 / t.front().c;
  for (auto& term : t) term.c *= inv;
}

// f[from..] - c * mult * g, merged under order.
TermVec sub_scaled(const TermVec& f, std::size_t from, const Rational& c, const Monomial& mult,
                   const TermVec& g, const MonomialOrder& order) {
  TermVec out;
  out.reserve(f.size() - from + g.size());
  std::size_t i = from, j = 0;
  Monomial gm;
  bool have = false;
  while (i < f.size() || j < g.size()) {
    if (j < g.size() && !have) {
      gm = g[j].m * mult;
      have = true;
    }
    int cmp;
    if (i >= f.size()) cmp = -1;
    else if (j >= g.size()) cmp = 1;
    else cmp = order.compare(f[i].m, gm);
    if (cmp > 0) {
      out.push_back(f[i++]);
    } else if (cmp < 0) {
      out.push_back({gm, -c * g[j].c});
      ++j;
      have = false;
    } else {
      Rational v = f[i].c - c * g[j].c;
      if (!is_zero(v)) out.push_back({f[i].m, v});
      ++i;
      ++j;
      have = false;
    }
  }
  return out;
}

const Elem* find_divisor(const Monomial& m, std::uint64_t mmask, const std::vector<Elem>& G) {
  for (const auto& g : G) {
    if (!g.active) continue;
    if (g.mask & ~mmask) continue;
    if (g.lm().divides(m)) return &g;
  }
  return nullptr;
}

// Full reduction of f against the active elements of G.
TermVec reduce(TermVec f, const std::vector<Elem>& G, const MonomialOrder& order) {
  TermVec r;
  std::size_t pos = 0;
  while (pos < f.size()) {
    const Term& lead = f[pos];
    const Elem* g = find_divisor(lead.m, divmask(lead.m), G);
    if (g) {
      Rational c = lead.c;  // g is monic
      Monomial mult = lead.m / g->lm();
      f = sub_scaled(f, pos, c, mult, g->t, order);
      pos = 0;
    } else {
      r.push_back(lead);
      ++pos;
    }
  }
  return r;
}

struct Pair {
  std::size_t i, j;
  Monomial lcm;
  long sugar;
};

long weighted_degree(const Monomial& m, const std::vector<int>& w) {
  if (w.empty()) return m.degree();
  long d = 0;
  for (std::size_t i = 0; i < m.size(); ++i) d += static_cast<long>(w[i]) * m[i];
  return d;
}

TermVec spoly(const Elem& a, const Elem& b, const Monomial& lcm, const MonomialOrder& order) {
  TermVec left = sub_scaled({}, 0, Rational(-1), lcm / a.lm(), a.t, order);
  return sub_scaled(left, 0, Rational(1), lcm / b.lm(), b.t, order);
}

class Engine {
 public:
  Engine(const MonomialOrder& order, const Budget& budget, const std::vector<int>& weights)
      : order_(order), budget_(budget), weights_(weights) {}

  void add(TermVec h) {
    make_monic(h);
    G_.push_back({std::move(h), 0, true});
    Elem& e = G_.back();
    e.mask = divmask(e.lm());
    total_terms_ += e.t.size();
    update(G_.size() - 1);
    check_budget();
  }

  void run() {
    while (!B_.empty()) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < B_.size(); ++k) {
        const Pair& a = B_[k];
        const Pair& b = B_[best];
        if (a.sugar != b.sugar) {
          if (a.sugar < b.sugar) best = k;
          continue;
        }
        int c = order_.compare(a.lcm, b.lcm);
        if (c < 0 || (c == 0 && (a.i < b.i || (a.i == b.i && a.j < b.j)))) best = k;
      }
      Pair p = std::move(B_[best]);
      B_[best] = std::move(B_.back());
      B_.pop_back();
      if (p.lcm.degree() > budget_.max_degree)
        throw BudgetExceeded("Groebner basis degree bound exceeded", static_cast<int>(p.lcm.degree()));
      reached_ = std::max<int>(reached_, p.lcm.degree());
      TermVec s = spoly(G_[p.i], G_[p.j], p.lcm, order_);
      TermVec h = reduce(std::move(s), G_, order_);
      if (!h.empty()) add(std::move(h));
    }
  }

  std::vector<TermVec> reduced_basis() const {
    std::vector<TermVec> out;
    std::vector<Elem> act;
    for (const auto& g : G_)
      if (g.active) act.push_back(g);
    for (std::size_t k = 0; k < act.size(); ++k) {
      TermVec tail(act[k].t.begin() + 1, act[k].t.end());
      act[k].active = false;
      TermVec r = reduce(std::move(tail), act, order_);
      act[k].active = true;
      TermVec full;
      full.reserve(r.size() + 1);
      full.push_back(act[k].t.front());
      for (auto& t : r) full.push_back(std::move(t));
      out.push_back(std::move(full));
    }
    std::sort(out.begin(), out.end(),
              [&](const TermVec& a, const TermVec& b) { return order_.compare(a.front().m, b.front().m) < 0; });
    return out;
  }

  const std::vector<Elem>& elems() const { return G_; }

 private:
  void check_budget() {
    std::size_t active = 0;
    for (const auto& g : G_) active += g.active;
    if (active > budget_.max_basis) throw BudgetExceeded("Groebner basis size bound exceeded", reached_);
    if (total_terms_ > budget_.max_terms) throw BudgetExceeded("Groebner basis term bound exceeded", reached_);
    if (B_.size() > budget_.max_pairs) throw BudgetExceeded("S-pair bound exceeded", reached_);
  }

  void update(std::size_t h) {
    const Monomial& lh = G_[h].lm();
    std::vector<Pair> C;
    for (std::size_t g = 0; g < h; ++g) {
      if (!G_[g].active) continue;
      Monomial l = lh.lcm(G_[g].lm());
      C.push_back({g, h, l, weighted_degree(l, weights_)});
    }
    std::vector<Pair> D;
    for (std::size_t a = 0; a < C.size(); ++a) {
      const Pair& p = C[a];
      bool keep = lh.coprime(G_[p.i].lm());
      if (!keep) {
        keep = true;
        for (std::size_t b = a + 1; b < C.size() && keep; ++b)
          if (C[b].lcm.divides(p.lcm)) keep = false;
        for (std::size_t b = 0; b < D.size() && keep; ++b)
          if (D[b].lcm.divides(p.lcm)) keep = false;
      }
      if (keep) D.push_back(p);
    }
    std::vector<Pair> nb;
    nb.reserve(B_.size() + D.size());
    for (auto& p : B_) {
      if (lh.divides(p.lcm)) {
        Monomial l1 = G_[p.i].lm().lcm(lh);
        Monomial l2 = G_[p.j].lm().lcm(lh);
        if (l1 != p.lcm && l2 != p.lcm) continue;
      }
      nb.push_back(std::move(p));
    }
    for (auto& p : D) {
      if (lh.coprime(G_[p.i].lm())) continue;
      nb.push_back(std::move(p));
    }
    B_ = std::move(nb);
    for (std::size_t g = 0; g < h; ++g) {
      if (G_[g].active && lh.divides(G_[g].lm())) {
        G_[g].active = false;
        total_terms_ -= G_[g].t.size();
      }
    }
  }

  MonomialOrder order_;
  Budget budget_;
  std::vector<int> weights_;
  std::vector<Elem> G_;
  std::vector<Pair> B_;
  std::size_t total_terms_ = 0;
  int reached_ = 0;
};

void check_vars(const std::vector<Polynomial>& ps, const VarSetPtr& vars) {
  for (const auto& p : ps)
    if (!same_varset(p.vars(), vars)) throw StructuralError("generators over different variable sets");
}

}  // namespace

Polynomial normal_form(const Polynomial& f, const std::vector<Polynomial>& G, const MonomialOrder& order) {
  check_vars(G, f.vars());
  std::vector<Elem> elems;
  for (const auto& g : G) {
    if (g.is_zero()) continue;
    TermVec t = to_terms(g, order);
    make_monic(t);
    Elem e{std::move(t), 0, true};
    e.mask = divmask(e.lm());
    elems.push_back(std::move(e));
  }
  return from_terms(reduce(to_terms(f, order), elems, order), f.vars());
}

Polynomial GroebnerBasis::normal_form(const Polynomial& f) const {
  if (generators.empty()) return f;
  return algebra::normal_form(f, generators, order);
}

GroebnerBasis buchberger(const std::vector<Polynomial>& gens, const MonomialOrder& order, const Budget& budget,
                         const std::vector<int>& weights) {
  if (gens.empty()) throw StructuralError("buchberger needs at least one generator to fix the ring");
  VarSetPtr vars = gens.front().vars();
  if (vars->size() == 0) throw StructuralError("empty variable set");
  check_vars(gens, vars);
  if (!weights.empty() && weights.size() != vars->size()) throw StructuralError("weight vector length mismatch");
  Engine eng(order, budget, weights);
  // Feed generators in a canonical order so the run is input-order independent.
  std::vector<TermVec> input;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    TermVec t = to_terms(g, order);
    make_monic(t);
    input.push_back(std::move(t));
  }
  std::sort(input.begin(), input.end(), [&](const TermVec& a, const TermVec& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k) {
      int c = order.compare(a[k].m, b[k].m);
      if (c != 0) return c < 0;
      if (a[k].c != b[k].c) return a[k].c < b[k].c;
    }
    return a.size() < b.size();
  });
  for (auto& t : input) {
    TermVec h = reduce(std::move(t), eng.elems(), order);
    if (!h.empty()) eng.add(std::move(h));
  }
  eng.run();
  GroebnerBasis out;
  out.vars = vars;
  out.order = order;
  out.reduced = true;
  for (const auto& t : eng.reduced_basis()) out.generators.push_back(from_terms(t, vars));
  return out;
}

bool is_groebner(const std::vector<Polynomial>& G, const MonomialOrder& order) {
  std::vector<Elem> elems;
  for (const auto& g : G) {
    if (g.is_zero()) continue;
    TermVec t = to_terms(g, order);
    make_monic(t);
    Elem e{std::move(t), 0, true};
    e.mask = divmask(e.lm());
    elems.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      if (elems[i].lm().coprime(elems[j].lm())) continue;
      Monomial l = elems[i].lm().lcm(elems[j].lm());
      if (!reduce(spoly(elems[i], elems[j], l, order), elems, order).empty()) return false;
    }
  return true;
}

Elimination eliminate(const std::vector<Polynomial>& gens, const std::vector<std::string>& drop, const Budget& budget,
                      const std::vector<int>& weights) {
  if (gens.empty()) throw StructuralError("eliminate needs at least one generator");
  VarSetPtr vars = gens.front().vars();
  check_vars(gens, vars);
  std::vector<bool> dropped(vars->size(), false);
  for (const auto& name : drop) {
    auto idx = vars->index(name);
    if (!idx) throw StructuralError("cannot eliminate unknown variable " + name);
    dropped[*idx] = true;
  }
  std::vector<std::string> order_names, kept;
  std::vector<int> w;
  for (std::size_t i = 0; i < vars->size(); ++i)
    if (dropped[i]) {
      order_names.push_back(vars->name(i));
      if (!weights.empty()) w.push_back(weights[i]);
    }
  std::size_t prefix = order_names.size();
  for (std::size_t i = 0; i < vars->size(); ++i)
    if (!dropped[i]) {
      order_names.push_back(vars->name(i));
      kept.push_back(vars->name(i));
      if (!weights.empty()) w.push_back(weights[i]);
    }
  VarSetPtr work = make_varset(order_names);
  VarSetPtr rem = make_varset(kept);
  std::vector<Polynomial> moved;
  for (const auto& g : gens) moved.push_back(g.rebase(work));
  GroebnerBasis gb = buchberger(moved, MonomialOrder::block(prefix), budget, w);
  Elimination out;
  out.remaining = rem;
  for (const auto& g : gb.generators) {
    bool free = true;
    for (const auto& [m, c] : g.terms()) {
      for (std::size_t i = 0; i < prefix && free; ++i)
        if (m[i] > 0) free = false;
      if (!free) break;
    }
    if (free) out.generators.push_back(g.rebase(rem));
  }
  return out;
}

BinomialCheck is_binomial_basis(const std::vector<Polynomial>& gens, const MonomialOrder& order,
                                const Budget& budget) {
  BinomialCheck out;
  std::vector<Polynomial> nz;
  for (const auto& g : gens)
    if (!g.is_zero()) nz.push_back(g);
  if (nz.empty()) {
    if (!gens.empty()) out.basis.vars = gens.front().vars();
    out.basis.order = order;
    out.basis.reduced = true;
    return out;
  }
  out.basis = buchberger(nz, order, budget);
  for (const auto& g : out.basis.generators) {
    if (g.size() > 2) {
      out.binomial = false;
      out.witness = g;
      break;
    }
  }
  return out;
}

}  // namespace staged::algebra
