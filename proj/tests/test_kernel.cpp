#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>
#include <unistd.h>

#include "helpers.hpp"
#include "property_suites.hpp"
#include "reference_sets.hpp"
#include "stagedtree/algebra/linalg.hpp"
#include "stagedtree/kernel/kernel.hpp"
#include "tree_helpers.hpp"

using namespace staged;
using namespace staged::kernel;
using algebra::Monomial;
using algebra::MonomialOrder;
using testutil::fixture;
using testutil::P;
using testutil::Ps;

using testutil::ideal_dimension;

TEST_CASE("coin flip kernel") {
  auto t = fixture("coinflip");
  auto k = kernel_ideal(t);
  auto vars = t.p_vars();
  REQUIRE(k.generators.size() == 1);
  CHECK(ideal_equal(k.generators, {P("p1*p3 - p1*p2 - p2^2", vars)}));
  // The sign-flipped trinomial is not a relation.
  CHECK_FALSE(k.contains(P("p1*p3 - p1*p2 + p2^2", vars)));
  CHECK(algebra::is_groebner(k.generators, MonomialOrder::degrevlex()));
}

TEST_CASE("fig3a kernel equals the quadratic set") {
  auto t = fixture("fig3a");
  auto k = kernel_ideal(t);
  CHECK(ideal_equal(k.generators, Ps(testutil::kFig3aG, t.p_vars())));
  CHECK(ideal_contains(k, Ps(testutil::kFig3aG, t.p_vars())));
}

TEST_CASE("tree without relations has the zero kernel") {
  auto t = tree::parse_tree("stage a : x y w ;\nvertex r stage a children l1 l2 l3 ;\n"
                            "vertex l1 leaf ; vertex l2 leaf ; vertex l3 leaf ;\nroot r ;");
  auto k = kernel_ideal(t);
  CHECK(k.is_zero_ideal());
  CHECK(graded_kernel_piece(t, 1).empty());
  CHECK(graded_kernel_piece(t, 2).empty());
}

TEST_CASE("kernel budget") {
  auto t = fixture("fig6");
  KernelConfig cfg;
  cfg.max_leaves = 5;
  CHECK_THROWS_AS(kernel_ideal(t, cfg), BudgetExceeded);
  cfg = KernelConfig{};
  cfg.max_labels = 2;
  CHECK_THROWS_AS(kernel_ideal(t, cfg), BudgetExceeded);
}

TEST_CASE("graded pieces") {
  auto c = fixture("coinflip");
  CHECK(graded_kernel_piece(c, 1).empty());
  auto two = graded_kernel_piece(c, 2);
  REQUIRE(two.size() == 1);
  CHECK(ideal_equal(two, {P("p1*p3 - p1*p2 - p2^2", c.p_vars())}));

  auto f = fixture("fig3a");
  auto one = graded_kernel_piece(f, 1);
  CHECK(one.size() == 2);
  auto vars = f.p_vars();
  std::vector<algebra::Vector> rows;
  for (const auto& g : one) {
    algebra::Vector v(8, 0);
    for (const auto& [m, q] : g.terms())
      for (std::size_t i = 0; i < 8; ++i)
        if (m[i]) v[i] = q;
    rows.push_back(v);
  }
  algebra::Vector a(8, 0), b(8, 0);
  a[1] = 1, a[4] = -1, b[3] = 1, b[6] = -1;
  CHECK(algebra::in_span(a, rows).member);
  CHECK(algebra::in_span(b, rows).member);

  CHECK_THROWS(graded_kernel_piece(f, 0));
  KernelConfig small;
  small.max_graded_monomials = 10;
  CHECK_THROWS_AS(graded_kernel_piece(f, 2, small), BudgetExceeded);
}

TEST_CASE("minimal generator degrees") {
  auto q = algebra::indexed_varset("q", 3);
  GroebnerBasis principal = algebra::buchberger({P("q1*q3 - q2^2", q)}, MonomialOrder::degrevlex());
  CHECK(minimal_generator_degrees(principal) == std::vector<int>{2});

  auto f = fixture("fig3a");
  auto degs = minimal_generator_degrees(kernel_ideal(f));
  CHECK(std::count(degs.begin(), degs.end(), 1) == 2);
  for (int d : degs) CHECK(d <= 2);
  auto mins = minimal_generators(kernel_ideal(f));
  CHECK(ideal_equal(mins, kernel_ideal(f).generators));

  GroebnerBasis bad;
  bad.vars = q;
  bad.generators = {P("q1 - q2^2", q)};
  CHECK_THROWS_AS(minimal_generator_degrees(bad), std::invalid_argument);
}

TEST_CASE("ideal equality") {
  auto v = algebra::indexed_varset("p", 3);
  auto A = Ps({"p1*p2 - p3^2", "p1 - p2"}, v);
  CHECK(ideal_equal(A, A));
  CHECK(ideal_equal(A, Ps({"p1 - p2", "p2^2 - p3^2"}, v)));
  CHECK_FALSE(ideal_equal(A, Ps({"p1 - p2"}, v)));
  CHECK(ideal_equal({}, {}));
  CHECK_FALSE(ideal_equal({}, A));
}

TEST_CASE("kernel cache") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / ("stagedtree_cache_test_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  auto t = fixture("coinflip");
  CHECK_FALSE(kernel_ideal_cached(t, dir.string(), true).has_value());
  auto a = kernel_ideal_cached(t, dir.string(), false);
  REQUIRE(a);
  CHECK(fs::exists(dir / (cache_key(t) + ".gb")));
  auto b = kernel_ideal_cached(t, dir.string(), true);
  REQUIRE(b);
  CHECK(b->generators == a->generators);
  CHECK(cache_key(t).size() == 16);
  CHECK(cache_key(t) != cache_key(fixture("fig3a")));
  fs::remove_all(dir);
}

TEST_CASE("graded oracle agrees with elimination on random trees") {
  std::mt19937_64 rng(77);
  testutil::RandomTreeOptions opt;
  opt.max_stages = 2;
  opt.max_arity = 3;
  opt.max_depth = 3;
  opt.max_vertices = 9;
  int checked = 0;
  for (int iter = 0; iter < 400 && checked < 220; ++iter) {
    opt.patterned = iter % 3 == 0;
    auto t = testutil::random_tree(rng, opt);
    if (t.num_leaves() > 8 || t.label_vars()->size() > 7) continue;
    auto k = kernel_ideal(t);
    for (int D = 1; D <= 2; ++D) {
      auto piece = graded_kernel_piece(t, D);
      CHECK(ideal_contains(k, piece));
      CHECK(piece.size() == ideal_dimension(k, D));
    }
    ++checked;
  }
  CHECK(checked >= 200);
}
