#pragma once

#include <span>
#include <vector>

#include "editmine/pattern.hpp"

namespace editmine {

// Cut a tree at depth d (root = depth 0): every subtree rooted at depth d and
// every leaf above that depth becomes a fresh hole, numbered 1.. in preorder.
// d-caps are hash keys, not generalizations: equal d-caps are a cheap
// necessary condition for two edits to share a pattern shape.
TreePtr dcap(const TreePtr& t, int d);

struct Cluster {
  std::vector<ConcreteEdit> members;
  EditPattern pattern;
  TreePtr key_before, key_after;  // member d-caps
  // Bindings of the current templates against each member, in member order;
  // maintained incrementally so extension checks need one anti-unification
  // per side instead of refolding all members.
  std::vector<Substitution> before_subs, after_subs;
};

struct ClusterOptions {
  int dcap_depth = 1;
  AnchorPolicy anchors;
  int workers = 1;  // buckets are independent; processed concurrently if > 1
  // When set, incremented once per attempted cluster-extension pattern check
  // (at most n^2 for an n-edit bucket).
  size_t* candidate_checks = nullptr;
};

// Cost of putting e into c: anti-unify each cluster template with the
// corresponding tree of e and charge the total size of all subtrees bound to
// the resulting holes, minus one per hole. Smaller means more alike.
size_t cost(const ConcreteEdit& e, const Cluster& c);

// Greedy: each edit joins the cheapest existing cluster that stays consistent
// and anchor-compatible (ties: earliest-created cluster), else founds a new
// one. Callers are expected to pass edits sharing one d-cap key; cluster_all
// does the bucketing.
std::vector<Cluster> cluster_bucket(std::span<const ConcreteEdit> edits,
                                    const ClusterOptions& opts = {});

// Bucket by (dcap(before), dcap(after)), cluster each bucket, concatenate in
// first-appearance bucket order. Deterministic for a fixed edit order
// regardless of worker count.
std::vector<Cluster> cluster_all(std::span<const ConcreteEdit> edits,
                                 const ClusterOptions& opts = {});

}  // namespace editmine
