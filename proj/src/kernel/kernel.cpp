#include "stagedtree/kernel/kernel.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "stagedtree/algebra/linalg.hpp"
#include "stagedtree/tree/canonical.hpp"
#include "stagedtree/tree/dsl.hpp"
#include "stagedtree/tree/ops.hpp"

namespace staged::kernel {

using algebra::Monomial;
using algebra::MonomialOrder;
using algebra::Rational;
using algebra::VarSetPtr;

namespace {

void check_size(const StagedTree& t, const KernelConfig& cfg) {
  std::size_t labels = t.label_vars()->size() - 1;
  if (t.num_leaves() > cfg.max_leaves)
    throw BudgetExceeded("kernel oracle: " + std::to_string(t.num_leaves()) + " leaves exceed the limit of " +
                             std::to_string(cfg.max_leaves),
                         0);
  if (labels > cfg.max_labels)
    throw BudgetExceeded("kernel oracle: " + std::to_string(labels) + " labels exceed the limit of " +
                             std::to_string(cfg.max_labels),
                         0);
}

std::string budget_line(const Budget& b) {
  return "basis=" + std::to_string(b.max_basis) + " degree=" + std::to_string(b.max_degree) +
         " terms=" + std::to_string(b.max_terms) + " pairs=" + std::to_string(b.max_pairs);
}

// All exponent vectors of total degree D in n variables, in lexicographically
// decreasing order (p1^D first).
void for_each_monomial(std::size_t n, int D, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> e(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == n) {
      e[i] = left;
      fn(e);
      e[i] = 0;
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[i] = k;
      rec(i + 1, left - k);
    }
    e[i] = 0;
  };
  if (n == 0) return;
  rec(0, D);
}

}  // namespace

std::size_t monomial_count(std::size_t n, int D) {
  if (n == 0) return D == 0 ? 1 : 0;
  // C(n + D - 1, D), saturating.
  long double c = 1;
  for (int i = 1; i <= D; ++i) c = c * static_cast<long double>(n - 1 + i) / i;
  if (c > 1e18L) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(c + 0.5L);
}

GroebnerBasis kernel_ideal(const StagedTree& t, const KernelConfig& cfg) {
  check_size(t, cfg);
  const auto& lv = t.label_vars();
  const std::size_t nl = lv->size();
  const std::size_t n = t.num_leaves();
  std::vector<std::string> names = lv->names();
  for (std::size_t r = 0; r < n; ++r) names.push_back(t.p_vars()->name(r));
  VarSetPtr ring = algebra::make_varset(names);
  std::vector<int> weights(nl, 1);
  weights.resize(nl + n, t.depth());

  auto lift = [&](const Monomial& m) {
    std::vector<Monomial::Exponent> e(m.exponents());
    e.resize(nl + n, 0);
    return Monomial(e);
  };
  std::vector<Polynomial> gens;
  for (std::size_t r = 0; r < n; ++r) {
    Polynomial g = Polynomial::variable(ring, nl + r);
    g -= Polynomial(ring, lift(tree::atom_image(t, r)));
    gens.push_back(g);
  }
  Polynomial z = Polynomial::variable(ring, nl - 1);
  for (std::size_t s = 0; s < t.stages().size(); ++s) {
    if (t.is_z_stage(static_cast<int>(s))) continue;
    Polynomial g = -z;
    for (const auto& l : t.stage(static_cast<int>(s)).labels) g += Polynomial::variable(ring, l);
    gens.push_back(g);
  }
  auto elim = algebra::eliminate(gens, lv->names(), cfg.budget, weights);

  GroebnerBasis out;
  out.vars = t.p_vars();
  out.order = MonomialOrder::degrevlex();
  out.reduced = true;
  for (const auto& g : elim.generators) out.generators.push_back(g.rebase(t.p_vars()));
  return out;
}

std::string cache_key(const StagedTree& t) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : tree::serialize(t)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::optional<GroebnerBasis> kernel_ideal_cached(const StagedTree& t, const std::string& cache_dir, bool cache_only,
                                                 const KernelConfig& cfg) {
  namespace fs = std::filesystem;
  fs::path file = fs::path(cache_dir) / (cache_key(t) + ".gb");
  const std::string header_budget = budget_line(cfg.budget);
  if (std::ifstream in(file); in) {
    std::string line;
    bool ok = std::getline(in, line) && line == "# stagedtree kernel cache v1";
    ok = ok && std::getline(in, line) && line == "# order degrevlex";
    ok = ok && std::getline(in, line) && line.rfind("# budget ", 0) == 0;
    if (ok) {
      GroebnerBasis b;
      b.vars = t.p_vars();
      b.reduced = true;
      try {
        while (std::getline(in, line))
          if (!line.empty()) b.generators.push_back(algebra::parse_polynomial(line, t.p_vars()));
        return b;
      } catch (const std::exception&) {
        // fall through and recompute
      }
    }
  }
  if (cache_only) return std::nullopt;
  GroebnerBasis b = kernel_ideal(t, cfg);
  std::error_code ec;
  fs::create_directories(cache_dir, ec);
  fs::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    out << "# stagedtree kernel cache v1\n# order degrevlex\n# budget " << header_budget << "\n";
    for (const auto& g : b.generators) out << g.to_string() << "\n";
  }
  fs::rename(tmp, file, ec);
  return b;
}

std::vector<Polynomial> graded_kernel_piece(const StagedTree& t, int D, const KernelConfig& cfg) {
  if (D < 1) throw std::invalid_argument("graded_kernel_piece needs D >= 1");
  const std::size_t n = t.num_leaves();
  std::size_t count = monomial_count(n, D);
  if (count > cfg.max_graded_monomials)
    throw BudgetExceeded("graded piece of degree " + std::to_string(D) + " has " + std::to_string(count) +
                             " monomials",
                         D);
  tree::Canonicalizer can(t);
  std::vector<std::vector<int>> monos;
  std::vector<Polynomial> images;
  // Images built along the enumeration: image(e) = product of atom images.
  for_each_monomial(n, D, [&](const std::vector<int>& e) {
    Polynomial img(can.vars(), 1);
    for (std::size_t r = 0; r < n; ++r)
      if (e[r]) img = img * can.atom(r).pow(static_cast<unsigned>(e[r]));
    monos.push_back(e);
    images.push_back(std::move(img));
  });
  std::map<Monomial, std::size_t> rows;
  for (const auto& img : images)
    for (const auto& [m, c] : img.terms()) rows.emplace(m, 0);
  std::size_t k = 0;
  for (auto& [m, idx] : rows) idx = k++;
  algebra::Matrix M(rows.size(), monos.size());
  for (std::size_t j = 0; j < images.size(); ++j)
    for (const auto& [m, c] : images[j].terms()) M.at(rows[m], j) = c;
  std::vector<Polynomial> out;
  for (const auto& v : algebra::null_space(M)) {
    Polynomial f(t.p_vars());
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] == 0) continue;
      std::vector<Monomial::Exponent> e(monos[j].begin(), monos[j].end());
      f.add_term(Monomial(e), v[j]);
    }
    out.push_back(f);
  }
  return out;
}

std::vector<Polynomial> minimal_generators(const GroebnerBasis& B, const Budget& budget) {
  for (const auto& g : B.generators)
    if (!g.is_homogeneous()) throw std::invalid_argument("minimal generators need a homogeneous ideal: " + g.to_string());
  std::vector<Polynomial> sorted = B.generators;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Polynomial& a, const Polynomial& b) { return a.degree() < b.degree(); });
  std::vector<Polynomial> chosen;
  std::optional<GroebnerBasis> current;
  for (const auto& g : sorted) {
    if (current && current->contains(g)) continue;
    chosen.push_back(g);
    current = algebra::buchberger(chosen, B.order, budget);
  }
  return chosen;
}

std::vector<int> minimal_generator_degrees(const GroebnerBasis& B, const Budget& budget) {
  std::vector<int> out;
  for (const auto& g : minimal_generators(B, budget)) out.push_back(g.degree());
  return out;
}

bool ideal_contains(const GroebnerBasis& B, const std::vector<Polynomial>& gens) {
  for (const auto& g : gens)
    if (!B.contains(g)) return false;
  return true;
}

bool ideal_equal(const std::vector<Polynomial>& A, const std::vector<Polynomial>& B, const Budget& budget) {
  auto nonzero = [](const std::vector<Polynomial>& v) {
    std::vector<Polynomial> out;
    for (const auto& p : v)
      if (!p.is_zero()) out.push_back(p);
    return out;
  };
  auto a = nonzero(A), b = nonzero(B);
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  auto ga = algebra::buchberger(a, MonomialOrder::degrevlex(), budget);
  auto gb = algebra::buchberger(b, MonomialOrder::degrevlex(), budget);
  return ideal_contains(ga, b) && ideal_contains(gb, a);
}

}  // namespace staged::kernel
