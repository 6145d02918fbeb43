#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace editmine {

struct SourceSpan {
  int begin_line = 0;
  int begin_col = 0;
  int end_line = 0;
  int end_col = 0;
  bool operator==(const SourceSpan&) const = default;
};

class Tree;
using TreePtr = std::shared_ptr<const Tree>;

// Immutable ordered tree. A node is either a labeled/unlabeled AST node or a
// hole ?N (template placeholder). Labels live on leaves only; interior nodes
// carry a kind and children. Instances are shared freely across threads.
//
// A "tree" in the strict sense contains no holes; a "template" may. Both use
// this one type, and operations that require hole-freedom say so.
class Tree {
public:
  static TreePtr leaf(std::string kind,
                      std::optional<SourceSpan> span = std::nullopt);
  static TreePtr leaf(std::string kind, std::string label,
                      std::optional<SourceSpan> span = std::nullopt);
  static TreePtr node(std::string kind, std::vector<TreePtr> children,
                      std::optional<SourceSpan> span = std::nullopt);
  static TreePtr hole(int id);

  bool is_hole() const { return hole_id_ != 0; }
  int hole_id() const { return hole_id_; }

  // Empty for holes.
  const std::string& kind() const { return kind_; }
  const std::optional<std::string>& label() const { return label_; }
  const std::vector<TreePtr>& children() const { return children_; }
  bool is_leaf() const { return children_.empty(); }

  // Number of leaves; a hole counts as one leaf.
  int leaf_count() const { return leaf_count_; }
  int node_count() const { return node_count_; }
  int hole_occurrences() const { return hole_occurrences_; }
  // Leaves have height 1.
  int height() const { return height_; }

  // Structural fingerprint; spans are excluded, hole ids included.
  uint64_t hash() const { return hash_; }

  const std::optional<SourceSpan>& span() const { return span_; }

private:
  Tree() = default;

  std::string kind_;
  std::optional<std::string> label_;
  std::vector<TreePtr> children_;
  int hole_id_ = 0;
  int leaf_count_ = 1;
  int node_count_ = 1;
  int hole_occurrences_ = 0;
  int height_ = 1;
  uint64_t hash_ = 0;
  std::optional<SourceSpan> span_;
};

// Deep structural equality; holes are equal iff their ids are.
bool structurally_equal(const TreePtr& a, const TreePtr& b);

// Number of leaves (holes included), i.e. the size measure used by the
// clustering cost.
inline int tree_size(const TreePtr& t) { return t->leaf_count(); }

inline bool contains_holes(const TreePtr& t) {
  return t->hole_occurrences() > 0;
}

// Hole ids in order of first occurrence in preorder.
std::vector<int> holes_of(const TreePtr& t);

// If the first child is a type annotation (kind "type-ann"), return it. Type
// annotations are ordinary children everywhere else.
TreePtr type_annotation(const TreePtr& t);

using Substitution = std::map<int, TreePtr>;

struct MissingBindingError : std::runtime_error {
  explicit MissingBindingError(int hole_id);
  int hole_id;
};

// Match a template against a subject. Non-hole positions need equal kinds,
// labels and child counts; a hole binds the whole subtree there, and a
// repeated hole must bind structurally equal subtrees. The subject may itself
// contain holes (they only match under a template hole), which makes this
// double as a template-subsumption test. The substitution, when it exists,
// is unique.
std::optional<Substitution> match(const TreePtr& tmpl, const TreePtr& subject);

// Replace every hole by its binding. Bindings may contain holes; unused
// bindings are ignored; a hole without a binding throws MissingBindingError.
TreePtr substitute(const TreePtr& tmpl, const Substitution& alpha);

// Renumber holes 1..n in order of first occurrence in preorder. If remap is
// non-null it receives old-id -> new-id. Idempotent.
TreePtr canonical_holes(const TreePtr& t, std::map<int, int>* remap = nullptr);

// Functors for unordered containers keyed on tree structure.
struct TreeStructuralHash {
  size_t operator()(const TreePtr& t) const {
    return static_cast<size_t>(t->hash());
  }
};
struct TreeStructuralEq {
  bool operator()(const TreePtr& a, const TreePtr& b) const {
    return structurally_equal(a, b);
  }
};

}  // namespace editmine
