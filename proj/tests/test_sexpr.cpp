#include <doctest.h>

#include "editmine/sexpr.hpp"
#include "support/gen.hpp"

using namespace editmine;
using namespace editmine::testing;

TEST_CASE("parses the documented example") {
  TreePtr t = parse_ast_text(
      "(call (index (id \"args\") (id \"i\")) (name \"equals\") "
      "(lit:string \"--launchdiag\"))");
  CHECK(t->kind() == "call");
  REQUIRE(t->children().size() == 3);
  CHECK(t->children()[0]->kind() == "index");
  CHECK(*t->children()[1]->label() == "equals");
  CHECK(t->children()[2]->kind() == "lit:string");
  CHECK(*t->children()[2]->label() == "--launchdiag");
}

TEST_CASE("single leaf, holes, comments, whitespace") {
  TreePtr lit = parse_ast_text("(lit:string \"--launchdiag\")");
  CHECK(lit->is_leaf());
  CHECK(*lit->label() == "--launchdiag");

  TreePtr h = parse_ast_text("  ?12 ; trailing comment\n");
  CHECK(h->is_hole());
  CHECK(h->hole_id() == 12);

  TreePtr t = parse_ast_text("; header\n(f ; mid\n  (id \"x\")\n  ?1)\n");
  CHECK(t->kind() == "f");
  CHECK(t->children()[1]->is_hole());

  TreePtr bare = parse_ast_text("(id)");
  CHECK(bare->is_leaf());
  CHECK_FALSE(bare->label());
}

TEST_CASE("label escapes") {
  TreePtr t = parse_ast_text("(lit:string \"a\\\"b\\\\c\")");
  CHECK(*t->label() == "a\"b\\c");
  CHECK(serialize_ast_text(t) == "(lit:string \"a\\\"b\\\\c\")");
  CHECK_THROWS_AS(parse_ast_text("(lit:string \"a\\nb\")"), ParseError);
}

TEST_CASE("serialization is canonical") {
  std::string messy = "( f   (id \"x\" )\n\t?2 )";
  std::string canon = serialize_ast_text(parse_ast_text(messy));
  CHECK(canon == "(f (id \"x\") ?2)");
  CHECK(serialize_ast_text(parse_ast_text(canon)) == canon);
}

TEST_CASE("round-trips generated trees") {
  std::mt19937 rng(77);
  Alphabet a{{"call", "if", "id", "lit:int", "block"}, {"x", "--flag", "0"}};
  for (int i = 0; i < 300; ++i) {
    TreePtr t = random_tree(rng, 20, a);
    TreePtr back = parse_ast_text(serialize_ast_text(t));
    CHECK(structurally_equal(back, t));
  }
}

TEST_CASE("parse errors carry position") {
  CHECK_THROWS_AS(parse_ast_text("(f (id \"x\")"), ParseError);
  CHECK_THROWS_AS(parse_ast_text("(f))"), ParseError);
  CHECK_THROWS_AS(parse_ast_text(")"), ParseError);
  CHECK_THROWS_AS(parse_ast_text(""), ParseError);
  CHECK_THROWS_AS(parse_ast_text("()"), ParseError);
  CHECK_THROWS_AS(parse_ast_text("(\"label-without-kind\")"), ParseError);
  CHECK_THROWS_AS(parse_ast_text("(f \"l\" (g))"), ParseError);  // label then children
  CHECK_THROWS_AS(parse_ast_text("(f (id \"unterminated))"), ParseError);
  CHECK_THROWS_AS(parse_ast_text("?0"), ParseError);
  CHECK_THROWS_AS(parse_ast_text("?notanumber"), ParseError);
  CHECK_THROWS_AS(parse_ast_text("(f) extra"), ParseError);

  try {
    parse_ast_text("(f\n  (g\n    bad\"\n))");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
    CHECK(e.col > 0);
  }
}

TEST_CASE("labels only attach to leaves") {
  // a label after children is malformed
  CHECK_THROWS_AS(parse_ast_text("(f (g) \"late\")"), ParseError);
}

TEST_CASE("spans cover each node's source extent") {
  std::string text = "(f (id \"x\")\n   (id \"y\"))";
  TreePtr t = parse_ast_text(text);
  REQUIRE(t->span());
  CHECK(t->span()->begin_line == 1);
  CHECK(t->span()->end_line == 2);
  REQUIRE(t->children()[1]->span());
  CHECK(t->children()[1]->span()->begin_line == 2);
}
