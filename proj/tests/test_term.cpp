#include <catch2/catch_amalgamated.hpp>

#include "forge/term.hpp"

using namespace forge;

TEST_CASE("term parsing and printing") {
  Term t = parse_term("g(f(a),g(X,f2(Y)))");
  CHECK(t.is_app());
  CHECK(t.name() == "g");
  CHECK(t.arity() == 2);
  CHECK(print_term(t) == "g(f(a),g(X,f2(Y)))");
  CHECK(parse_term(print_term(t)) == t);

  CHECK(parse_term("X").is_var());
  CHECK(parse_term("a").is_const());
  CHECK_THROWS_AS(parse_term("g(a)"), TermError);      // g is binary
  CHECK_THROWS_AS(parse_term("f(a,b)"), TermError);    // f is unary
  CHECK_THROWS_AS(parse_term("g(a,"), SyntaxError);
  CHECK_THROWS_AS(parse_term("X(a)"), SyntaxError);    // variables are leaves
}

TEST_CASE("positions: the worked example") {
  Term t = parse_term("g(f(a),g(X,f2(Y)))");
  CHECK(subterm(t, {2, 1}) == parse_term("X"));
  CHECK(subterm(t, {}) == t);
  CHECK(subterm(t, {1}) == parse_term("f(a)"));
  CHECK(subterm(t, {1, 1}) == parse_term("a"));
  CHECK(subterm(t, {2, 2}) == parse_term("f2(Y)"));
  CHECK_THROWS_AS(subterm(t, {3}), InvalidPosition);

  CHECK(positions(t).size() == term_size(t));
  CHECK(position_valid(t, {2, 2, 1}));
  CHECK_FALSE(position_valid(t, {2, 2, 2}));
}

TEST_CASE("replace round-trips with subterm") {
  Term t = parse_term("g(f(a),g(X,f2(Y)))");
  Term s = parse_term("h(a,b,c)");
  Term r = replace(t, {2, 2}, s);
  CHECK(subterm(r, {2, 2}) == s);
  CHECK(subterm(r, {1}) == subterm(t, {1}));
  CHECK(replace(t, {}, s) == s);
}

TEST_CASE("match_term") {
  // worked case: h(c,V1170,c) vs h(c,a,c) -> {V1170 -> a}
  auto sub = match_term(parse_term("h(c,V1170,c)"), parse_term("h(c,a,c)"));
  REQUIRE(sub);
  CHECK(sub->at("V1170") == parse_term("a"));

  // a variable matches anything
  sub = match_term(parse_term("X"), parse_term("g(a,f(b))"));
  REQUIRE(sub);
  CHECK(sub->at("X") == parse_term("g(a,f(b))"));

  // consistency: g(X,X) vs g(a,b) has no unifier
  CHECK_FALSE(match_term(parse_term("g(X,X)"), parse_term("g(a,b)")));
  CHECK(match_term(parse_term("g(X,X)"), parse_term("g(a,a)")).has_value());
}

TEST_CASE("substitution application") {
  Substitution sub;
  sub["X"] = parse_term("g(a,Y)");
  sub["Z"] = parse_term("b");
  Term t = parse_term("g(Y,g(X,Z))");
  CHECK(print_term(apply_substitution(t, sub)) == "g(Y,g(g(a,Y),b))");
}

TEST_CASE("disjoint positions") {
  CHECK(disjoint_positions({1, 1}, {1, 2}));
  CHECK_FALSE(disjoint_positions({1}, {1, 2}));
  CHECK_FALSE(disjoint_positions({}, {1}));
  CHECK(disjoint_positions({2}, {1, 5}));
}

TEST_CASE("position similarity") {
  CHECK(position_similarity({3, 3, 1}, {3, 3}) == Catch::Approx(0.8));
  CHECK(position_similarity({1, 2}, {1, 2}) == 1.0);
  CHECK(position_similarity({1}, {2}) == 0.0);
  CHECK(position_similarity({}, {}) == 1.0);
  // bounds
  CHECK(position_similarity({1, 2, 3}, {1, 9}) >= 0.0);
  CHECK(position_similarity({1, 2, 3}, {1, 9}) <= 1.0);
}
