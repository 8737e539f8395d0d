#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "helpers.hpp"
#include "stagedtree/balance/balance.hpp"
#include "stagedtree/kernel/kernel.hpp"
#include "stagedtree/minors/minors.hpp"
#include "stagedtree/onestage/onestage.hpp"
#include "tree_helpers.hpp"

using namespace staged;
using namespace staged::onestage;
using algebra::Rational;
using testutil::fixture;
using testutil::P;

namespace {

std::vector<std::string> form_strings(const ToricCertificate& c) {
  std::vector<std::string> out;
  for (const auto& f : c.forms) out.push_back(f.to_string());
  return out;
}

// Shapes of height at most h: f(h) = 1 + f(h-1)^k.
double f_count(int k, int h) { return h < 0 ? 0 : 1 + std::pow(f_count(k, h - 1), k); }

// Orbit count by Burnside over the label permutations of S2 and S3.
double orbit_count(int k, int d) {
  auto exact = [](auto g, int d) { return g(d) - g(d - 1); };
  auto f = [&](int h) { return f_count(k, h); };
  if (k == 2) {
    auto swap = [&](int h) { return h < 0 ? 0.0 : 1 + f(h - 1); };
    return (exact(f, d) + exact(swap, d)) / 2;
  }
  std::function<double(int)> trans = [&](int h) { return h < 0 ? 0.0 : 1 + f(h - 1) * trans(h - 1); };
  auto cyc = [&](int h) { return h < 0 ? 0.0 : 1 + f(h - 1); };
  return (exact(f, d) + 3 * exact(trans, d) + 2 * exact(cyc, d)) / 6;
}

std::vector<int> random_perm(std::mt19937_64& rng, int k) {
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace

TEST_CASE("veronese basis order") {
  auto b = veronese_basis(2, 3);
  CHECK(b.monomials == std::vector<std::vector<int>>{{3, 0}, {2, 1}, {1, 2}, {0, 3}});
  CHECK(b.index_of({1, 2}) == 2);
  CHECK_THROWS_AS(b.index_of({1, 1}), std::invalid_argument);
  CHECK(veronese_basis(3, 2).monomials.size() == 6);
  CHECK(veronese_basis(3, 4).monomials.size() == 15);
}

TEST_CASE("classify one-stage trees") {
  auto cf = classify_onestage(fixture("coinflip"));
  CHECK(cf.is_one_stage);
  CHECK(cf.is_caterpillar);
  CHECK_FALSE(cf.is_maximal);
  CHECK(cf.k == 2);
  CHECK(cf.d == 2);

  auto f4 = classify_onestage(fixture("fig4"));
  CHECK(f4.is_one_stage);
  CHECK_FALSE(f4.is_caterpillar);
  CHECK(f4.d == 4);

  auto full = classify_onestage(from_shape("((..)(..))", 2));
  CHECK(full.is_maximal);
  CHECK_FALSE(full.is_caterpillar);

  CHECK_FALSE(classify_onestage(fixture("fig7")).is_one_stage);
  CHECK_THROWS_AS(degree_d_span(fixture("fig7")), NotOneStage);
  CHECK_THROWS_AS(balanced_onestage(fixture("fig5")), NotOneStage);
  CHECK_THROWS_AS(veronese_certificate(fixture("fig7")), NotOneStage);
  CHECK_THROWS_AS(binary_onestage_certificate(from_shape("(...)", 3)), NotOneStage);
}

TEST_CASE("balanced one-stage trees are the maximal ones") {
  for (int k = 2; k <= 3; ++k)
    for (int d = 1; d <= 3; ++d)
      for (const auto& t : enumerate_onestage(k, d, false)) {
        CAPTURE(shape_of(t));
        CHECK(balanced_onestage(t) == balance::is_balanced(t).balanced);
      }
}

TEST_CASE("degree-d span examples") {
  auto cf = fixture("coinflip");
  auto span = degree_d_span(cf);
  // l3 has atom t2*z, which is t1*t2 + t2^2.
  CHECK(span[2] == algebra::Vector{Rational(0), Rational(1), Rational(1)});
  CHECK(span[0] == algebra::Vector{Rational(1), Rational(0), Rational(0)});
  CHECK(span_rank(cf) == 3);
  CHECK(is_full_veronese(cf));

  auto f4 = fixture("fig4");
  CHECK(span_rank(f4) == 5);
  CHECK(is_full_veronese(f4));
  // p1 sits at depth 2: t1^2 z^2 gives 1, 2, 1.
  CHECK(degree_d_span(f4)[0] == algebra::Vector{Rational(1), Rational(2), Rational(1), Rational(0), Rational(0)});
}

TEST_CASE("span entries are multinomial coefficients") {
  // A single leaf at depth 1 under a k-ary root: its row is the expansion
  // of t_i * (t1 + ... + tk)^(d-1), summing to k^(d-1).
  for (int k = 2; k <= 3; ++k)
    for (int d = 1; d <= 4; ++d) {
      std::string shape = ".";
      for (int i = 0; i < d; ++i) shape = "(" + shape + std::string(k - 1, '.') + ")";
      auto t = from_shape(shape, k);
      auto span = degree_d_span(t);
      auto last = span.back();  // leaf under the root in the last position
      Rational sum = 0;
      for (const auto& x : last) sum += x;
      CAPTURE(shape);
      CHECK(sum == Rational(static_cast<long>(std::pow(k, d - 1))));
      for (const auto& row : span) {
        Rational s = 0;
        for (const auto& x : row) s += x;
        CHECK(s > 0);
      }
    }
}

TEST_CASE("full Veronese examples in three labels") {
  CHECK(is_full_veronese(from_shape("(((...)..)(.(...).).)", 3)));
  CHECK(is_full_veronese(from_shape("(((...)..)(..(...)).)", 3)));
  CHECK(span_rank(from_shape("(((...)..)(.(...).).)", 3)) == 10);
  CHECK_FALSE(is_full_veronese(from_shape("(((...)..)..)", 3)));
  CHECK(span_rank(from_shape("(((...)..)..)", 3)) == 7);
}

TEST_CASE("binary certificate of fig4") {
  auto t = fixture("fig4");
  auto c = binary_onestage_certificate(t);
  CHECK(c.verified);
  CHECK(c.method == "binary");
  CHECK(form_strings(c) ==
        std::vector<std::string>{"p1 - 2*p3 + p4", "p3 - p4", "p4", "p5", "-p4 - 2*p5 + p6", "p2 - p3 - p5"});
  CHECK(kernel::ideal_equal(minors::certificate_kernel(t, c), kernel::kernel_ideal(t).generators));
}

TEST_CASE("binary certificate of the coin flip") {
  auto t = fixture("coinflip");
  auto c = binary_onestage_certificate(t);
  CHECK(c.verified);
  CHECK(form_strings(c) == std::vector<std::string>{"p1", "p2", "-p2 + p3"});
  CHECK(kernel::ideal_equal(minors::certificate_kernel(t, c), kernel::kernel_ideal(t).generators));
}

TEST_CASE("binary certificates verify on every tree of depth at most 3") {
  for (int d = 1; d <= 3; ++d)
    for (const auto& t : enumerate_onestage(2, d, false)) {
      CAPTURE(shape_of(t));
      auto c = binary_onestage_certificate(t);
      CHECK(c.verified);
      CHECK(c.forms.size() == t.num_leaves());
      CHECK(kernel::ideal_equal(minors::certificate_kernel(t, c), kernel::kernel_ideal(t).generators));
    }
}

TEST_CASE("veronese certificate in three labels") {
  kernel::KernelConfig wide;
  wide.max_leaves = 32;
  wide.max_labels = 16;
  for (const char* s : {"(((...)..)(.(...).).)", "(((...)..)(..(...)).)", "((...)(...)(...))"}) {
    auto t = from_shape(s, 3);
    CAPTURE(std::string(s));
    auto c = veronese_certificate(t);
    REQUIRE(c.verified);
    CHECK(c.method == "veronese");
    CHECK(kernel::ideal_equal(minors::certificate_kernel(t, c), kernel::kernel_ideal(t, wide).generators));
  }
  auto cat = veronese_certificate(from_shape("(((...)..)..)", 3));
  CHECK_FALSE(cat.verified);
  CHECK(cat.failing_clause == "span");
}

TEST_CASE("veronese certificate on every full tree of depth three") {
  std::size_t full = 0;
  for (const auto& s : enumerate_shapes(3, 3, true)) {
    auto t = from_shape(s, 3);
    CAPTURE(s);
    auto c = veronese_certificate(t);
    CHECK(c.verified == is_full_veronese(t));
    if (c.verified) ++full;
  }
  CHECK(full == 105);
}

TEST_CASE("algebra equality") {
  CHECK(algebra_equality(from_shape("(((...)..)(.(...).).)", 3), from_shape("(((...)..)(..(...)).)", 3)));
  CHECK_FALSE(algebra_equality(from_shape("(((...)..)..)", 3), from_shape("(((...)..)(.(...).).)", 3)));
  CHECK(algebra_equality(fixture("fig4"), fixture("fig4")));
  CHECK_THROWS_AS(algebra_equality(fixture("fig4"), fixture("coinflip")), std::invalid_argument);

  // Pairs related by tree inclusion.
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"((.(...)(...))((...)..).)", "(((...)(...)(...))((...)..).)"},
      {"((.(...).)((...)..)((...)..))", "(((...)(...).)((...)..)((...)..))"},
      {"((.(...)(...))(...).)", "((.(...)(...))(...)(...))"},
      {"(((...)(...).).(...))", "(((...)(...).)(...)(...))"},
      {"((.(...)(...))(...)(...))", "(((...)(...)(...))(...)(...))"}};
  for (const auto& [a, b] : pairs) {
    CAPTURE(a);
    CHECK(algebra_equality(from_shape(a, 3), from_shape(b, 3)));
  }
}

TEST_CASE("algebra equality is invariant under relabelling") {
  std::mt19937_64 rng(2024);
  auto shapes = enumerate_shapes(3, 3, false);
  std::uniform_int_distribution<std::size_t> pick(0, shapes.size() - 1);
  for (int i = 0; i < 200; ++i) {
    const auto& s = shapes[pick(rng)];
    auto perm = random_perm(rng, 3);
    CAPTURE(s);
    CHECK(algebra_equality(from_shape(s, 3), from_shape(permute_shape(s, perm), 3), perm));
  }
}

TEST_CASE("linear relations vanish exactly on caterpillars") {
  for (int k = 2; k <= 3; ++k)
    for (int d = 1; d <= 3; ++d)
      for (const auto& s : enumerate_shapes(k, d, true)) {
        auto t = from_shape(s, k);
        CAPTURE(s);
        CHECK(linear_relations(t).empty() == classify_onestage(t).is_caterpillar);
      }
}

TEST_CASE("linear relation between swapped two-step paths") {
  // p[u12] - p[u21]: the two leaves reached by t1 t2 and by t2 t1.
  auto t = from_shape("((..)(..))", 2);
  auto rel = linear_relations(t);
  REQUIRE(rel.size() == 1);
  auto want = tree::linear_form_of(P("p2 - p3", t.p_vars()));
  CHECK((rel[0] == want || rel[0] == want * Rational(-1)));
  auto f4 = linear_relations(fixture("fig4"));
  REQUIRE(f4.size() == 1);
  auto want4 = tree::linear_form_of(P("-p2 + p3 + p4 + p5", fixture("fig4").p_vars()));
  CHECK((f4[0] == want4 || f4[0] == want4 * Rational(-1)));
}

TEST_CASE("enumeration counts") {
  CHECK(enumerate_shapes(2, 1, false) == std::vector<std::string>{"(..)"});
  CHECK(enumerate_shapes(2, 1, true).size() == 1);
  CHECK(enumerate_shapes(2, 2, false) == std::vector<std::string>{"((..)(..))", "((..).)", "(.(..))"});
  CHECK(enumerate_shapes(2, 2, true).size() == 2);
  CHECK(enumerate_shapes(3, 2, true).size() == 3);
  CHECK(enumerate_shapes(3, 3, true).size() == 143);
  for (int k = 2; k <= 3; ++k)
    for (int d = 1; d <= (k == 2 ? 4 : 3); ++d) {
      CAPTURE(k);
      CAPTURE(d);
      auto all = enumerate_shapes(k, d, false);
      CHECK(static_cast<double>(all.size()) == f_count(k, d) - f_count(k, d - 1));
      CHECK(static_cast<double>(enumerate_shapes(k, d, true).size()) == orbit_count(k, d));
      std::set<std::string> uniq(all.begin(), all.end());
      CHECK(uniq.size() == all.size());
      for (const auto& s : all) CHECK(from_shape(s, k).depth() == d);
    }
}

TEST_CASE("enumeration representatives are orbit minima") {
  for (const auto& s : enumerate_shapes(3, 3, true))
    for (const auto& p : std::vector<std::vector<int>>{{1, 0, 2}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}})
      CHECK(s <= permute_shape(s, p));
}

TEST_CASE("enumeration budget") {
  CHECK_THROWS_AS(enumerate_shapes(4, 2, false), algebra::BudgetExceeded);
  CHECK_THROWS_AS(enumerate_shapes(2, 6, false), algebra::BudgetExceeded);
  EnumerateConfig small;
  small.max_trees = 100;
  CHECK_THROWS_AS(enumerate_shapes(3, 3, false, small), algebra::BudgetExceeded);
  CHECK_NOTHROW(enumerate_shapes(2, 3, false, small));
  CHECK_THROWS_AS(enumerate_shapes(2, 0, false), std::invalid_argument);
}

TEST_CASE("shape round trip") {
  for (const auto& t : enumerate_onestage(2, 3, false)) CHECK(shape_of(from_shape(shape_of(t), 2)) == shape_of(t));
  CHECK(shape_of(fixture("fig4")) == "((..)((.(..)).))");
  CHECK(permute_shape("((..).)", {1, 0}) == "(.(..))");
  CHECK_THROWS_AS(from_shape(".", 2), std::invalid_argument);
  CHECK_THROWS_AS(from_shape("(...)", 2), std::invalid_argument);
}
