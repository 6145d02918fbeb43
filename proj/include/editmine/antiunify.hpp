#pragma once

#include <span>
#include <vector>

#include "editmine/tree.hpp"

namespace editmine {

// Least general generalization. Positions where the inputs agree (same kind,
// label and child count) keep their structure; any disagreement collapses to
// a hole, and two positions share a hole exactly when their pairs (resp.
// tuples) of substituted subtrees are structurally equal. Holes are numbered
// by first occurrence in preorder. Inputs may themselves contain holes, which
// generalize like opaque leaves; substitutions then bind to hole-carrying
// fragments so that substitute(tmpl, alpha_k) always reproduces input k.

struct Generalization2 {
  TreePtr tmpl;
  Substitution alpha1;
  Substitution alpha2;
};

Generalization2 au2(const TreePtr& t1, const TreePtr& t2);

struct GeneralizationN {
  TreePtr tmpl;
  std::vector<Substitution> alphas;  // one per input
};

// Left fold of au2 with substitution composition; the result is independent
// of input order up to hole renaming. Input must be nonempty.
GeneralizationN au_many(std::span<const TreePtr> trees);

}  // namespace editmine
