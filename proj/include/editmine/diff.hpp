#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "editmine/tree.hpp"

namespace editmine {

// Paths address nodes as child-index sequences. The empty path names a
// synthetic holder whose single child, path {0}, is the tree root; the holder
// exists so a script can replace the root itself. Every path into real tree
// content therefore starts with 0.
using TreePath = std::vector<int>;

std::string to_string(const TreePath&);

struct LeafPayload {
  std::string kind;
  std::optional<std::string> label;
  bool operator==(const LeafPayload&) const = default;
};

enum class TreeSide { source, target };

// A node identity in the coordinates of the unedited source or target tree.
// Edits carry these so later stages can relate edits to one another without
// replaying the script (the operational paths below shift as edits apply).
struct NodeRef {
  TreeSide side;
  TreePath path;
  bool operator==(const NodeRef&) const = default;
  bool operator<(const NodeRef& o) const {
    return side != o.side ? side < o.side : path < o.path;
  }
};

// One edit, with paths valid at its application time (earlier edits in the
// script have already been applied):
//   insert: new leaf `payload` becomes child `position` of `parent`;
//           children at >= position shift right
//   del:    remove the leaf at `node`
//   update: replace the leaf at `node` by a leaf with `payload`
//   move:   detach the subtree at `node`, then insert it as child `position`
//           of `parent` (parent resolved after the detach)
struct TreeEdit {
  enum class Op { insert, del, update, move };
  Op op = Op::update;
  TreePath node;
  TreePath parent;
  int position = 0;
  LeafPayload payload;
  std::vector<NodeRef> touched;  // see NodeRef
};

std::string to_debug_string(const TreeEdit&);

struct NodeMapping {
  std::map<TreePath, TreePath> to_target;
  std::map<TreePath, TreePath> to_source;
  void add(TreePath src, TreePath tgt);
  size_t size() const { return to_target.size(); }
};

struct EditScript {
  std::vector<TreeEdit> edits;
  NodeMapping mapping;
};

std::string to_debug_string(const EditScript&);

struct ApplyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Three-phase differencing: greedy top-down matching of structurally equal
// subtrees of height >= 2, bottom-up matching of interior nodes whose kinds
// agree and more than half of whose descendants already match, then recovery
// matching of same-kind children under matched parents. The script is built
// by simulation in the order update, move, insert, delete (inserts top-down,
// deletes bottom-up), so apply(diff(s, t), s) reproduces t exactly. Scripts
// are valid by construction, not minimal. Deterministic; ties pick the
// smallest preorder position in the target.
EditScript diff(const TreePtr& source, const TreePtr& target);

// Replays a script; throws ApplyError on out-of-range paths or positions, on
// structural misuse (deleting or updating an interior node), or if the script
// does not leave exactly one root.
TreePtr apply(std::span<const TreeEdit> edits, const TreePtr& source);
TreePtr apply(const EditScript& script, const TreePtr& source);

}  // namespace editmine
