#pragma once

#include <optional>
#include <vector>

#include "editmine/diff.hpp"
#include "editmine/tree.hpp"

namespace editmine {

struct Provenance {
  std::string project;
  std::string commit;
  std::string path;
  std::optional<SourceSpan> span;
  bool operator==(const Provenance&) const = default;
};

// A lifted before/after subtree pair: the smallest mapped context around one
// connected group of edits. Both trees are hole-free and differ.
struct ConcreteEdit {
  TreePtr before;
  TreePtr after;
  Provenance origin;
};

struct EditComponent {
  std::vector<size_t> edit_indices;  // into the script, ascending
  std::vector<NodeRef> touched;      // union of the edits' touched nodes
};

// Partition a script's edits into connected components. Two edits are
// connected when they touch the same node, or touch nodes that are parent and
// child or share a parent; node identity crosses trees through the script's
// mapping. The relation's transitive closure defines the partition.
// Components come out ordered by their smallest edit index.
std::vector<EditComponent> components(const EditScript& script);

// Lift one component to a before/after pair: the lowest mapped source
// ancestor covering all touched nodes (target-only nodes reflect back through
// the mapping) and its counterpart. Returns nothing when the only covering
// mapped ancestor is the tree root on either side, or when the two subtrees
// are equal. Provenance carries only the source span here; callers fill in
// project, commit and path.
std::optional<ConcreteEdit> lift(const EditComponent& component,
                                 const TreePtr& source, const TreePtr& target,
                                 const NodeMapping& mapping);

struct ExtractOptions {
  // Components with more edits than this are noise (reformat-scale changes)
  // and are dropped.
  size_t max_component_edits = 20;
};

// diff -> components -> size cap -> lift, in component order.
std::vector<ConcreteEdit> extract_edits(const EditScript& script,
                                        const TreePtr& source,
                                        const TreePtr& target,
                                        const ExtractOptions& opts = {});

}  // namespace editmine
