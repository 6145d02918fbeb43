#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "editmine/tree.hpp"

namespace editmine {

// Text form of trees and templates, one s-expression per tree:
//
//   expr  := hole | node
//   node  := '(' kind [label] expr* ')'
//   hole  := '?' digits                       positive id
//   kind  := atom, e.g. call, id, lit:string
//   label := '"' chars '"', escapes \" and \\ only
//
// Whitespace separates tokens; ';' starts a comment running to end of line.
// Labels are only legal on leaves. serialize_ast_text emits the canonical
// form: single spaces, no comments, minimal escaping. parse then serialize
// canonicalizes any accepted input; serialize then parse reproduces the tree.

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line, int col);
  int line;
  int col;
};

// Parses exactly one expression; trailing non-whitespace is an error.
// Nodes carry source spans of their parenthesized extent.
TreePtr parse_ast_text(std::string_view text);

std::string serialize_ast_text(const TreePtr& t);

}  // namespace editmine
