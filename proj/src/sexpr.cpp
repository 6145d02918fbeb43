#include "editmine/sexpr.hpp"

#include <cctype>
#include <vector>

namespace editmine {

ParseError::ParseError(const std::string& what, int line, int col)
    : std::runtime_error("line " + std::to_string(line) + ", col " +
                         std::to_string(col) + ": " + what),
      line(line),
      col(col) {}

namespace {

struct Cursor {
  std::string_view text;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  char take() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, col);
  }

  void skip_blank() {
    while (!eof()) {
      char c = peek();
      if (c == ';') {
        while (!eof() && peek() != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        return;
      }
    }
  }
};

bool is_delimiter(char c) {
  return c == '(' || c == ')' || c == '"' || c == ';' ||
         std::isspace(static_cast<unsigned char>(c));
}

std::string read_atom(Cursor& cur) {
  std::string atom;
  while (!cur.eof() && !is_delimiter(cur.peek())) atom.push_back(cur.take());
  return atom;
}

std::string read_label(Cursor& cur) {
  cur.take();  // opening quote
  std::string label;
  while (true) {
    if (cur.eof()) cur.fail("unterminated label");
    char c = cur.take();
    if (c == '"') return label;
    if (c == '\\') {
      if (cur.eof()) cur.fail("unterminated escape");
      char e = cur.take();
      if (e != '"' && e != '\\') cur.fail("unknown escape in label");
      label.push_back(e);
    } else {
      label.push_back(c);
    }
  }
}

TreePtr read_hole(Cursor& cur) {
  cur.take();  // '?'
  std::string digits;
  while (!cur.eof() && std::isdigit(static_cast<unsigned char>(cur.peek())))
    digits.push_back(cur.take());
  if (digits.empty()) cur.fail("hole id expected after '?'");
  if (!cur.eof() && !is_delimiter(cur.peek())) cur.fail("malformed hole");
  long id = std::stol(digits);
  if (id <= 0 || id > 1'000'000'000) cur.fail("hole id out of range");
  return Tree::hole(static_cast<int>(id));
}

struct Frame {
  std::string kind;
  std::optional<std::string> label;
  std::vector<TreePtr> children;
  int line, col;
};

}  // namespace

TreePtr parse_ast_text(std::string_view text) {
  Cursor cur{text};
  std::vector<Frame> stack;
  TreePtr result;

  auto complete = [&](TreePtr value) {
    if (stack.empty()) {
      result = std::move(value);
      return;
    }
    Frame& top = stack.back();
    if (top.label) cur.fail("children are not allowed after a label");
    top.children.push_back(std::move(value));
  };

  while (true) {
    cur.skip_blank();
    if (cur.eof()) {
      if (!stack.empty()) cur.fail("unexpected end of input inside node");
      if (!result) cur.fail("expected an expression");
      return result;
    }
    if (result) cur.fail("trailing content after expression");

    char c = cur.peek();
    if (c == '(') {
      Frame f;
      f.line = cur.line;
      f.col = cur.col;
      cur.take();
      cur.skip_blank();
      if (cur.eof()) cur.fail("unexpected end of input inside node");
      if (is_delimiter(cur.peek()) || cur.peek() == '?')
        cur.fail("node kind expected after '('");
      f.kind = read_atom(cur);
      cur.skip_blank();
      if (!cur.eof() && cur.peek() == '"') f.label = read_label(cur);
      stack.push_back(std::move(f));
    } else if (c == ')') {
      if (stack.empty()) cur.fail("unmatched ')'");
      cur.take();
      Frame f = std::move(stack.back());
      stack.pop_back();
      SourceSpan span{f.line, f.col, cur.line, cur.col};
      TreePtr t;
      if (f.label)
        t = Tree::leaf(std::move(f.kind), std::move(*f.label), span);
      else if (f.children.empty())
        t = Tree::leaf(std::move(f.kind), span);
      else
        t = Tree::node(std::move(f.kind), std::move(f.children), span);
      complete(std::move(t));
    } else if (c == '?') {
      complete(read_hole(cur));
    } else if (c == '"') {
      cur.fail("label must directly follow a node kind");
    } else {
      cur.fail("expected '(', ')' or a hole");
    }
  }
}

std::string serialize_ast_text(const TreePtr& t) {
  std::string out;
  // explicit stack: nullptr marks a pending ')'
  std::vector<const Tree*> stack{t.get()};
  while (!stack.empty()) {
    const Tree* n = stack.back();
    stack.pop_back();
    if (!n) {
      out.push_back(')');
      continue;
    }
    if (!out.empty() && out.back() != '(') out.push_back(' ');
    if (n->is_hole()) {
      out.push_back('?');
      out += std::to_string(n->hole_id());
      continue;
    }
    out.push_back('(');
    out += n->kind();
    if (n->label()) {
      out += " \"";
      for (char c : *n->label()) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
      }
      out.push_back('"');
    }
    stack.push_back(nullptr);
    for (auto it = n->children().rbegin(); it != n->children().rend(); ++it)
      stack.push_back(it->get());
  }
  return out;
}

}  // namespace editmine
