#include "editmine/tree.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace editmine {

namespace {

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

uint64_t hash_bytes(const std::string& s) {
  // FNV-1a
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

TreePtr Tree::leaf(std::string kind, std::optional<SourceSpan> span) {
  auto t = std::shared_ptr<Tree>(new Tree());
  t->kind_ = std::move(kind);
  t->hash_ = mix(1, hash_bytes(t->kind_));
  t->span_ = span;
  return t;
}

TreePtr Tree::leaf(std::string kind, std::string label,
                   std::optional<SourceSpan> span) {
  auto t = std::shared_ptr<Tree>(new Tree());
  t->kind_ = std::move(kind);
  t->label_ = std::move(label);
  t->hash_ = mix(mix(2, hash_bytes(t->kind_)), hash_bytes(*t->label_));
  t->span_ = span;
  return t;
}

TreePtr Tree::node(std::string kind, std::vector<TreePtr> children,
                   std::optional<SourceSpan> span) {
  if (children.empty()) return leaf(std::move(kind), span);
  auto t = std::shared_ptr<Tree>(new Tree());
  t->kind_ = std::move(kind);
  t->children_ = std::move(children);
  t->leaf_count_ = 0;
  t->node_count_ = 1;
  t->height_ = 0;
  uint64_t h = mix(3, hash_bytes(t->kind_));
  for (const auto& c : t->children_) {
    t->leaf_count_ += c->leaf_count_;
    t->node_count_ += c->node_count_;
    t->hole_occurrences_ += c->hole_occurrences_;
    t->height_ = std::max(t->height_, c->height_);
    h = mix(h, c->hash_);
  }
  t->height_ += 1;
  t->hash_ = h;
  t->span_ = span;
  return t;
}

TreePtr Tree::hole(int id) {
  if (id <= 0) throw std::invalid_argument("hole id must be positive");
  auto t = std::shared_ptr<Tree>(new Tree());
  t->hole_id_ = id;
  t->hole_occurrences_ = 1;
  t->hash_ = mix(4, static_cast<uint64_t>(id));
  return t;
}

bool structurally_equal(const TreePtr& a, const TreePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->hash() != b->hash()) return false;
  // Hash agreement is near-certainty; verify to make it certainty. Iterative
  // to survive deep chains.
  std::vector<std::pair<const Tree*, const Tree*>> stack{{a.get(), b.get()}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    if (x == y) continue;
    if (x->hole_id() != y->hole_id() || x->kind() != y->kind() ||
        x->label() != y->label() ||
        x->children().size() != y->children().size())
      return false;
    for (size_t i = 0; i < x->children().size(); ++i)
      stack.emplace_back(x->children()[i].get(), y->children()[i].get());
  }
  return true;
}

std::vector<int> holes_of(const TreePtr& t) {
  std::vector<int> out;
  std::unordered_set<int> seen;
  std::vector<const Tree*> stack{t.get()};
  while (!stack.empty()) {
    const Tree* n = stack.back();
    stack.pop_back();
    if (n->is_hole()) {
      if (seen.insert(n->hole_id()).second) out.push_back(n->hole_id());
      continue;
    }
    if (n->hole_occurrences() == 0) continue;
    // push children right-to-left so the stack pops them in preorder
    for (auto it = n->children().rbegin(); it != n->children().rend(); ++it)
      stack.push_back(it->get());
  }
  return out;
}

TreePtr type_annotation(const TreePtr& t) {
  if (!t->children().empty() && t->children()[0]->kind() == "type-ann")
    return t->children()[0];
  return nullptr;
}

MissingBindingError::MissingBindingError(int id)
    : std::runtime_error("no binding for hole ?" + std::to_string(id)),
      hole_id(id) {}

namespace {

bool match_rec(const TreePtr& tmpl, const TreePtr& subject,
               Substitution& alpha) {
  if (tmpl->is_hole()) {
    auto [it, inserted] = alpha.emplace(tmpl->hole_id(), subject);
    return inserted || structurally_equal(it->second, subject);
  }
  if (subject->is_hole()) return false;
  if (tmpl->kind() != subject->kind() || tmpl->label() != subject->label() ||
      tmpl->children().size() != subject->children().size())
    return false;
  for (size_t i = 0; i < tmpl->children().size(); ++i)
    if (!match_rec(tmpl->children()[i], subject->children()[i], alpha))
      return false;
  return true;
}

}  // namespace

std::optional<Substitution> match(const TreePtr& tmpl, const TreePtr& subject) {
  Substitution alpha;
  if (!match_rec(tmpl, subject, alpha)) return std::nullopt;
  return alpha;
}

TreePtr substitute(const TreePtr& tmpl, const Substitution& alpha) {
  if (tmpl->is_hole()) {
    auto it = alpha.find(tmpl->hole_id());
    if (it == alpha.end()) throw MissingBindingError(tmpl->hole_id());
    return it->second;
  }
  if (tmpl->hole_occurrences() == 0) return tmpl;
  std::vector<TreePtr> kids;
  kids.reserve(tmpl->children().size());
  for (const auto& c : tmpl->children()) kids.push_back(substitute(c, alpha));
  return Tree::node(tmpl->kind(), std::move(kids), tmpl->span());
}

namespace {

TreePtr renumber(const TreePtr& t, std::map<int, int>& remap, int& next) {
  if (t->is_hole()) {
    auto [it, inserted] = remap.emplace(t->hole_id(), next);
    if (inserted) ++next;
    return it->second == t->hole_id() ? t : Tree::hole(it->second);
  }
  if (t->hole_occurrences() == 0) return t;
  std::vector<TreePtr> kids;
  kids.reserve(t->children().size());
  for (const auto& c : t->children()) kids.push_back(renumber(c, remap, next));
  return Tree::node(t->kind(), std::move(kids), t->span());
}

}  // namespace

TreePtr canonical_holes(const TreePtr& t, std::map<int, int>* remap) {
  std::map<int, int> local;
  int next = 1;
  TreePtr out = renumber(t, local, next);
  if (remap) *remap = std::move(local);
  return out;
}

}  // namespace editmine
