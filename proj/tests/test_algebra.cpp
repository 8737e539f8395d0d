#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "stagedtree/algebra/groebner.hpp"
#include "stagedtree/algebra/linalg.hpp"

using namespace staged::algebra;
using testutil::P;
using testutil::Ps;

namespace {

bool same_ideal(const std::vector<Polynomial>& a, const std::vector<Polynomial>& b, const MonomialOrder& o) {
  auto ga = buchberger(a, o);
  auto gb = buchberger(b, o);
  return ga.generators == gb.generators;
}

Monomial mono(const std::string& text, const VarSetPtr& v) { return P(text, v).leading_monomial(MonomialOrder::lex()); }

}  // namespace

TEST_CASE("rational canonical form") {
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(parse_rational("-0/5")) == "0");
  CHECK(to_string(parse_rational("12")) == "12");
  CHECK(parse_rational("0").get_den() == 1);
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("x"));
}

TEST_CASE("varset rejects duplicates") {
  CHECK_THROWS_AS(make_varset({"a", "b", "a"}), StructuralError);
  auto v = indexed_varset("p", 3);
  CHECK(v->name(2) == "p3");
  CHECK(*v->index("p2") == 1);
}

TEST_CASE("degrevlex examples") {
  auto v = indexed_varset("p", 3);
  CHECK(degrevlex_compare(mono("p1^2*p3", v), mono("p1*p2*p3", v)) > 0);
  CHECK(degrevlex_compare(mono("p1", v), mono("p1", v)) == 0);
  CHECK(degrevlex_compare(mono("p1", v), mono("p2^2", v)) < 0);
  CHECK_THROWS_AS(degrevlex_compare(Monomial{1, 0}, Monomial{1, 0, 0}), StructuralError);
}

TEST_CASE("degrevlex is a total order compatible with multiplication") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> e(0, 3);
  for (int t = 0; t < 300; ++t) {
    Monomial a{e(rng), e(rng), e(rng), e(rng)}, b{e(rng), e(rng), e(rng), e(rng)}, c{e(rng), e(rng), e(rng), e(rng)};
    int ab = degrevlex_compare(a, b);
    CHECK(ab == -degrevlex_compare(b, a));
    CHECK((ab == 0) == (a == b));
    CHECK(degrevlex_compare(a * c, b * c) == ab);
    if (ab > 0 && degrevlex_compare(b, c) > 0) CHECK(degrevlex_compare(a, c) > 0);
  }
}

TEST_CASE("polynomial printing and parsing") {
  auto v = indexed_varset("p", 3);
  Polynomial f = P("p1*p3 - p1*p2 + p2^2", v);
  CHECK(f.to_string() == "-p1*p2 + p2^2 + p1*p3");
  CHECK(P(f.to_string(), v) == f);
  CHECK(P("1/2*p1 - 3/4", v).to_string() == "1/2*p1 - 3/4");
  CHECK(P("2*p1*p1", v).to_string() == "2*p1^2");
  CHECK(Polynomial(v).to_string() == "0");
  CHECK_THROWS(P("p1 + q", v));
  CHECK_THROWS(P("p1 p2", v));
  CHECK_THROWS(P("", v));
}

TEST_CASE("ring axioms on random polynomials") {
  auto v = indexed_varset("x", 4);
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 250; ++t) {
    auto a = testutil::random_poly(rng, v, 4, 3);
    auto b = testutil::random_poly(rng, v, 4, 3);
    auto c = testutil::random_poly(rng, v, 4, 3);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a - a).is_zero());
    CHECK(P(a.to_string(), v) == a);
  }
}

TEST_CASE("normal form examples") {
  auto v = indexed_varset("p", 3);
  auto g = Ps({"p1*p3 - p2^2"}, v);
  CHECK(normal_form(P("p1*p3 - p2^2", v), g, MonomialOrder::degrevlex()).is_zero());
  CHECK(normal_form(P("p1*p2*p3 - p2^3", v), g,
                    MonomialOrder::degrevlex())
            .is_zero());
  Polynomial f = P("p1^2 + p3", v);
  CHECK(normal_form(f, {}, MonomialOrder::degrevlex()) == f);
  auto other = indexed_varset("q", 3);
  CHECK_THROWS_AS(normal_form(P("q1", other), g, MonomialOrder::degrevlex()), StructuralError);
}

TEST_CASE("buchberger examples") {
  auto v = indexed_varset("p", 3);
  auto gb = buchberger(Ps({"p1*p3 - p2^2"}, v), MonomialOrder::degrevlex());
  REQUIRE(gb.generators.size() == 1);
  // monic in DegRevLex: p2^2 leads p1*p3
  CHECK(gb.generators[0] == -P("p1*p3 - p2^2", v));
  CHECK(gb.reduced);

  auto xyz = make_varset({"x", "y", "z"});
  auto lexgb = buchberger(Ps({"x - y", "y - z"}, xyz), MonomialOrder::lex());
  REQUIRE(lexgb.generators.size() == 2);
  CHECK(std::count(lexgb.generators.begin(), lexgb.generators.end(), P("x - z", xyz)) == 1);
  CHECK(std::count(lexgb.generators.begin(), lexgb.generators.end(), P("y - z", xyz)) == 1);
}

TEST_CASE("coin-flip elimination") {
  auto v = make_varset({"t1", "t2", "z", "p1", "p2", "p3"});
  auto gens = Ps({"p1 - t1^2", "p2 - t1*t2", "p3 - t2*z", "t1 + t2 - z"}, v);
  auto el = eliminate(gens, {"t1", "t2", "z"});
  REQUIRE(el.generators.size() == 1);
  auto pv = el.remaining;
  Polynomial k = el.generators[0];
  // monic under DegRevLex: leading term p1*p2 with coefficient 1
  CHECK((k == P("p1*p2 + p2^2 - p1*p3", pv) || k == P("-p1*p2 - p2^2 + p1*p3", pv)));
  GroebnerBasis ker{pv, el.generators, MonomialOrder::degrevlex(), true};
  CHECK(ker.contains(P("p1*p3 - p1*p2 - p2^2", pv)));
  CHECK_FALSE(ker.contains(P("p1*p3 - p1*p2 + p2^2", pv)));
}

TEST_CASE("trivial eliminations") {
  auto v = make_varset({"t", "p"});
  CHECK(eliminate(Ps({"p - t^2"}, v), {"t"}).generators.empty());
  auto xy = make_varset({"x", "y"});
  CHECK(eliminate(Ps({"x - y"}, xy), {"x"}).generators.empty());
  CHECK_THROWS_AS(eliminate(Ps({"x - y"}, xy), {"w"}), StructuralError);
}

TEST_CASE("binomial basis examples") {
  auto q = indexed_varset("q", 3);
  CHECK(is_binomial_basis(Ps({"q1*q3 - q2^2"}, q)).binomial);
  auto p = indexed_varset("p", 3);
  auto r = is_binomial_basis(Ps({"p1*p3 - p1*p2 + p2^2"}, p));
  CHECK_FALSE(r.binomial);
  REQUIRE(r.witness);
  CHECK(r.witness->size() == 3);
  CHECK(is_binomial_basis({Polynomial(p)}).binomial);
  CHECK(is_binomial_basis({}).binomial);
}

TEST_CASE("buchberger properties on random ideals") {
  auto v = indexed_varset("x", 3);
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int t = 0; t < 240; ++t) {
    std::vector<Polynomial> gens;
    int k = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < k; ++j) gens.push_back(testutil::random_poly(rng, v, 3, 2, 3));
    bool all_zero = std::all_of(gens.begin(), gens.end(), [](const Polynomial& g) { return g.is_zero(); });
    if (all_zero) continue;
    MonomialOrder o = (t % 2) ? MonomialOrder::degrevlex() : MonomialOrder::lex();
    auto gb = buchberger(gens, o);
    CHECK(is_groebner(gb.generators, o));
    for (const auto& g : gens) CHECK(gb.contains(g));
    // reduced: monic, no term divisible by another leading monomial
    for (std::size_t i = 0; i < gb.generators.size(); ++i) {
      CHECK(gb.generators[i].leading_coefficient(o) == 1);
      for (std::size_t j = 0; j < gb.generators.size(); ++j) {
        if (i == j) continue;
        Monomial lm = gb.generators[j].leading_monomial(o);
        for (const auto& [m, c] : gb.generators[i].terms()) CHECK_FALSE(lm.divides(m));
      }
    }
    if (!gb.generators.empty()) {
      auto again = buchberger(gb.generators, o);
      CHECK(again.generators == gb.generators);
      std::vector<Polynomial> rev(gens.rbegin(), gens.rend());
      CHECK(buchberger(rev, o).generators == gb.generators);
    }
    ++checked;
  }
  CHECK(checked >= 200);
}

TEST_CASE("elimination result lies in the input ideal") {
  auto v = make_varset({"a", "b", "x", "y"});
  std::mt19937_64 rng(99);
  for (int t = 0; t < 200; ++t) {
    std::vector<Polynomial> gens;
    for (int j = 0; j < 2; ++j) gens.push_back(testutil::random_poly(rng, v, 3, 2, 2));
    if (gens[0].is_zero() && gens[1].is_zero()) continue;
    auto el = eliminate(gens, {"a", "b"});
    auto full = buchberger(gens, MonomialOrder::degrevlex());
    for (const auto& g : el.generators) {
      for (const auto& [m, c] : g.terms()) CHECK(m.size() == 2);
      CHECK(full.contains(g.rebase(v)));
    }
  }
}

TEST_CASE("binomiality is invariant under generator permutation") {
  auto v = indexed_varset("x", 4);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    std::vector<Polynomial> gens;
    for (int j = 0; j < 3; ++j) {
      auto a = testutil::random_poly(rng, v, 1, 2, 1);
      auto b = testutil::random_poly(rng, v, (t % 3 == 0) ? 2 : 1, 2, 1);
      gens.push_back(a - b);
    }
    auto r1 = is_binomial_basis(gens);
    std::shuffle(gens.begin(), gens.end(), rng);
    auto r2 = is_binomial_basis(gens);
    CHECK(r1.binomial == r2.binomial);
  }
}

TEST_CASE("same_ideal helper sanity") {
  auto v = indexed_varset("x", 2);
  CHECK(same_ideal(Ps({"x1 - x2", "x2^2"}, v), Ps({"x1^2", "x1 - x2"}, v), MonomialOrder::degrevlex()));
}

TEST_CASE("null space examples") {
  Matrix id(3, 3);
  for (int i = 0; i < 3; ++i) id.at(i, i) = 1;
  CHECK(null_space(id).empty());

  Matrix ones = Matrix::from_rows({{Rational(1), Rational(1)}}, 2);
  auto ns = null_space(ones);
  REQUIRE(ns.size() == 1);
  CHECK(ns[0][0] == -ns[0][1]);
  CHECK_FALSE(is_zero(ns[0][0]));

  Matrix m = Matrix::from_rows({{Rational(1), Rational(2), Rational(3)}, {Rational(0), Rational(1), Rational(4)}}, 3);
  auto n2 = null_space(m);
  REQUIRE(n2.size() == 1);
  auto prod = m.multiply(n2[0]);
  CHECK(is_zero(prod[0]));
  CHECK(is_zero(prod[1]));
  CHECK(rank(m) == 2);
}

TEST_CASE("null space vectors are annihilated (random)") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> e(-2, 2);
  for (int t = 0; t < 200; ++t) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m.at(i, j) = e(rng);
    auto ns = null_space(m);
    CHECK(ns.size() + rank(m) == c);
    for (const auto& v : ns)
      for (const auto& x : m.multiply(v)) CHECK(is_zero(x));
  }
}

TEST_CASE("span membership examples") {
  std::vector<Vector> S = {{Rational(1), Rational(0), Rational(1)}, {Rational(0), Rational(1), Rational(1)}};
  auto z = in_span({Rational(0), Rational(0), Rational(0)}, S);
  CHECK(z.member);
  for (const auto& c : z.coefficients) CHECK(is_zero(c));
  auto s = in_span(S[1], S);
  CHECK(s.member);
  CHECK(s.coefficients == Vector{Rational(0), Rational(1)});
  CHECK_FALSE(in_span({Rational(1), Rational(0), Rational(0)}, S).member);
}
