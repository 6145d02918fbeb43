#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "editmine/antiunify.hpp"
#include "editmine/extract.hpp"

namespace editmine {

// A rewrite rule: match before_template, then emit after_template with every
// after hole filled by the binding of its mapped before hole. hole_map is
// total over the after template's holes.
struct EditPattern {
  TreePtr before_template;
  TreePtr after_template;
  std::map<int, int> hole_map;  // after hole id -> before hole id
  std::vector<Provenance> support;
};

// Anti-unifies the before sides and the after sides, then maps every after
// hole onto a before hole whose bound subtrees agree on every edit (ties pick
// the smallest before hole id). Returns nothing when some after hole has no
// counterpart, or when both templates degenerate to bare holes (a rule that
// would match anything). Least generality makes this exact: it succeeds iff
// any rule consistent with all the edits exists.
std::optional<EditPattern> learn_pattern(std::span<const ConcreteEdit> edits);

// Nothing when the tree does not match the before template. A learned
// pattern replays its own members: apply_pattern(p, i_k) = o_k.
std::optional<TreePtr> apply_pattern(const EditPattern& p, const TreePtr& t);

// Anchor positions are labels that clustering refuses to generalize away, by
// default the "name" child of "call" nodes, so that e.g. equals and
// equalsIgnoreCase rewrites never share a cluster.
struct AnchorPolicy {
  std::map<std::string, std::string> anchor_child_kind = {{"call", "name"}};
};

// False only when both before trees expose an anchor and the labels differ.
bool anchors_compatible(const ConcreteEdit& a, const ConcreteEdit& b,
                        const AnchorPolicy& policy = {});

// After template with its holes renamed through hole_map, so shared holes
// print with the same number as in the before template.
TreePtr after_with_shared_holes(const EditPattern& p);

}  // namespace editmine
