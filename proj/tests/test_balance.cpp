#include <doctest.h>

#include <random>
#include <set>

#include "helpers.hpp"
#include "reference_sets.hpp"
#include "stagedtree/balance/balance.hpp"
#include "stagedtree/kernel/kernel.hpp"
#include "tree_helpers.hpp"

using namespace staged;
using namespace staged::balance;
using testutil::fixture;
using testutil::Ps;

namespace {

std::set<std::string> texts(const std::vector<algebra::Polynomial>& v) {
  std::set<std::string> out;
  for (const auto& p : v) out.insert(normalise_sign(p).to_string());
  return out;
}

std::set<std::string> texts(const std::vector<std::string>& v, const algebra::VarSetPtr& vars) {
  return texts(Ps(v, vars));
}

}  // namespace

TEST_CASE("coin flip is not balanced") {
  auto t = fixture("coinflip");
  auto b = is_balanced(t);
  CHECK_FALSE(b.balanced);
  REQUIRE(b.witness);
  CHECK(t.vertex(b.witness->u).name == "r");
  CHECK(t.vertex(b.witness->v).name == "v");
  CHECK(b.witness->i == 0);
  CHECK(b.witness->j == 1);
  CHECK_THROWS_AS(quadratic_gb(t), NotBalanced);
  CHECK_THROWS_AS(colour_normal_form(t), NotBalanced);
  auto k = koszul_sufficient(t);
  CHECK(k.sufficient);
}

TEST_CASE("fig3a quadratic basis") {
  auto t = fixture("fig3a");
  CHECK(is_balanced(t).balanced);
  auto q = quadratic_gb(t);
  CHECK(q.is_groebner);
  CHECK(q.basis.generators.size() == testutil::kFig3aG.size());
  CHECK(texts(q.basis.generators) == texts(testutil::kFig3aG, t.p_vars()));
  CHECK(kernel::ideal_equal(q.basis.generators, kernel::kernel_ideal(t).generators));
  for (const auto& g : q.basis.generators) CHECK(g.leading_coefficient(algebra::MonomialOrder::degrevlex()) == 1);
  for (std::size_t i = 1; i < q.basis.generators.size(); ++i)
    CHECK(q.basis.generators[i - 1].degree() <= q.basis.generators[i].degree());

  auto r = quadratic_gb_reduced(t);
  CHECK(r.is_groebner);
  CHECK(r.basis.vars->size() == 6);
  CHECK(texts(r.basis.generators) == texts(testutil::kFig3aReduced, r.basis.vars));
  CHECK(koszul_sufficient(t).sufficient);
}

TEST_CASE("degree one pairs") {
  auto t = fixture("fig3a");
  std::vector<std::pair<int, int>> want{{1, 4}, {3, 6}};
  CHECK(degree_one_pairs(t) == want);
  CHECK(degree_one_pairs(fixture("coinflip")).empty());
}

TEST_CASE("singleton stages are balanced") {
  auto t = tree::parse_tree("stage a : x y ;\nstage b : u v w ;\nvertex r stage a children s l1 ;\n"
                            "vertex s stage b children l2 l3 l4 ;\nvertex l1 leaf ; vertex l2 leaf ;\n"
                            "vertex l3 leaf ; vertex l4 leaf ;\nroot r ;");
  CHECK(is_balanced(t).balanced);
  auto q = quadratic_gb(t);
  CHECK(q.basis.generators.empty());
  CHECK(q.is_groebner);
  CHECK(kernel::kernel_ideal(t).is_zero_ideal());
}

TEST_CASE("colour normal form of fig3a and fig4") {
  auto t = fixture("fig3a");
  auto c = colour_normal_form(t);
  CHECK_FALSE(colour_audit(c).has_value());
  CHECK(tree::subtree_polynomial(c, c.root()) == tree::subtree_polynomial(t, t.root()));
  CHECK(is_balanced(c).balanced);
}

TEST_CASE("multiplicity is additive along single-stage chains") {
  auto t = fixture("fig3a");
  int a = *t.find_stage("a");
  int b = *t.find_stage("b");
  CHECK(tree::multiplicity(t, a, t.root()) == 2);
  CHECK(tree::multiplicity(t, b, t.root()) == 1);
  CHECK(tree::multiplicity(t, b, *t.find_vertex("r11")) == 0);
  CHECK(tree::multiplicity(t, b, *t.find_vertex("r2")) == 1);
}

TEST_CASE("random balanced trees") {
  std::mt19937_64 rng(2024);
  testutil::RandomTreeOptions opt;
  opt.max_stages = 3;
  opt.max_arity = 3;
  opt.max_depth = 3;
  opt.max_vertices = 12;
  int balanced = 0, unbalanced = 0;
  for (int iter = 0; iter < 2000 && balanced < 200; ++iter) {
    opt.patterned = iter % 2 == 0;
    auto t = testutil::random_tree(rng, opt);
    if (t.num_leaves() > 9 || t.label_vars()->size() > 8) continue;
    auto b = is_balanced(t);
    if (!b.balanced) {
      ++unbalanced;
      const auto& w = *b.witness;
      CHECK(t.vertex(w.u).stage == t.vertex(w.v).stage);
      CHECK(w.i < w.j);
      continue;
    }
    ++balanced;
    auto q = quadratic_gb(t);
    CHECK(q.is_groebner);
    auto k = kernel::kernel_ideal(t);
    CHECK(kernel::ideal_equal(q.basis.generators, k.generators));
    for (const auto& g : q.basis.generators) CHECK(g.degree() <= 2);
    auto c = colour_normal_form(t);
    CHECK_FALSE(colour_audit(c).has_value());
    CHECK(is_balanced(c).balanced);
    CHECK(tree::subtree_polynomial(c, c.root()) == tree::subtree_polynomial(tree::homogenize(t), 0));
  }
  CHECK(balanced >= 200);
  CHECK(unbalanced > 0);
}

TEST_CASE("one-label stages count as one") {
  auto t = tree::parse_tree(
      "stage s : w ;\nstage a : a1 a2 ;\nvertex r stage a children u v ;\nvertex u stage a children x l2 ;\n"
      "vertex x stage s children l1 ;\nvertex v stage a children l3 l4 ;\n"
      "vertex l1 leaf ; vertex l2 leaf ; vertex l3 leaf ; vertex l4 leaf ;\nroot r ;");
  CHECK(is_balanced(t).balanced);
  auto K = kernel::kernel_ideal(t);
  CHECK(kernel::ideal_equal(quadratic_gb(t).basis.generators, K.generators));
  for (const char* f : {"coinflip", "fig3a", "fig4", "fig6"}) {
    auto s = fixture(f);
    CHECK(is_balanced(tree::homogenize(s)).balanced == is_balanced(s).balanced);
  }
}
