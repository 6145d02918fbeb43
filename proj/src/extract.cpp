#include "editmine/extract.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace editmine {

namespace {

struct UnionFind {
  std::vector<size_t> parent;
  explicit UnionFind(size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), size_t{0});
  }
  size_t find(size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(size_t a, size_t b) { parent[find(a)] = find(b); }
};

// Reflect a target-side node to source coordinates when the mapping allows.
NodeRef canonical(const NodeRef& r, const NodeMapping& m) {
  if (r.side == TreeSide::target) {
    auto it = m.to_source.find(r.path);
    if (it != m.to_source.end()) return {TreeSide::source, it->second};
  }
  return r;
}

std::optional<NodeRef> canonical_parent(const NodeRef& r,
                                        const NodeMapping& m) {
  if (r.path.empty()) return std::nullopt;
  NodeRef p{r.side, TreePath(r.path.begin(), r.path.end() - 1)};
  return canonical(p, m);
}

}  // namespace

std::vector<EditComponent> components(const EditScript& script) {
  const size_t n = script.edits.size();
  UnionFind uf(n);

  // Two edits are connected iff some touched node of one equals, parents, or
  // shares a parent with a touched node of the other. All three cases reduce
  // to the edits emitting a common key below: the node itself or its parent.
  std::map<NodeRef, size_t> first_seen;
  for (size_t k = 0; k < n; ++k) {
    std::set<NodeRef> keys;
    for (const NodeRef& r : script.edits[k].touched) {
      keys.insert(canonical(r, script.mapping));
      if (auto p = canonical_parent(r, script.mapping)) keys.insert(*p);
    }
    for (const NodeRef& key : keys) {
      auto [it, inserted] = first_seen.emplace(key, k);
      if (!inserted) uf.unite(k, it->second);
    }
  }

  std::map<size_t, EditComponent> by_root;
  for (size_t k = 0; k < n; ++k) by_root[uf.find(k)].edit_indices.push_back(k);

  std::vector<EditComponent> out;
  std::map<size_t, size_t> order;  // min edit index -> component
  for (auto& [root, comp] : by_root) order.emplace(comp.edit_indices[0], root);
  for (auto& [minidx, root] : order) {
    EditComponent comp = std::move(by_root[root]);
    std::set<NodeRef> touched;
    for (size_t k : comp.edit_indices)
      touched.insert(script.edits[k].touched.begin(),
                     script.edits[k].touched.end());
    comp.touched.assign(touched.begin(), touched.end());
    out.push_back(std::move(comp));
  }
  return out;
}

namespace {

TreePtr subtree_at(const TreePtr& root, const TreePath& path) {
  // path is in holder coordinates: [0, ...] descends from the tree root
  if (path.empty() || path[0] != 0) return nullptr;
  TreePtr cur = root;
  for (size_t i = 1; i < path.size(); ++i) {
    int idx = path[i];
    if (idx < 0 || static_cast<size_t>(idx) >= cur->children().size())
      return nullptr;
    cur = cur->children()[idx];
  }
  return cur;
}

}  // namespace

std::optional<ConcreteEdit> lift(const EditComponent& component,
                                 const TreePtr& source, const TreePtr& target,
                                 const NodeMapping& mapping) {
  if (component.touched.empty()) return std::nullopt;

  std::vector<TreePath> src_nodes;
  for (const NodeRef& r : component.touched) {
    if (r.side == TreeSide::source) {
      src_nodes.push_back(r.path);
      continue;
    }
    // lowest mapped ancestor-or-self on the target side, reflected back
    TreePath p = r.path;
    while (true) {
      auto it = mapping.to_source.find(p);
      if (it != mapping.to_source.end()) {
        src_nodes.push_back(it->second);
        break;
      }
      if (p.empty()) return std::nullopt;  // nothing mapped above this node
      p.pop_back();
    }
  }

  // lowest common ancestor = longest common path prefix
  TreePath lca = src_nodes[0];
  for (const TreePath& p : src_nodes) {
    size_t i = 0;
    while (i < lca.size() && i < p.size() && lca[i] == p[i]) ++i;
    lca.resize(i);
  }
  while (!mapping.to_target.count(lca)) {
    if (lca.empty()) return std::nullopt;
    lca.pop_back();
  }
  if (lca.size() < 2) return std::nullopt;  // at or above the tree root
  const TreePath& counterpart = mapping.to_target.at(lca);
  if (counterpart.size() < 2) return std::nullopt;

  TreePtr before = subtree_at(source, lca);
  TreePtr after = subtree_at(target, counterpart);
  if (!before || !after || structurally_equal(before, after))
    return std::nullopt;
  ConcreteEdit edit;
  edit.before = before;
  edit.after = after;
  edit.origin.span = before->span();
  return edit;
}

std::vector<ConcreteEdit> extract_edits(const EditScript& script,
                                        const TreePtr& source,
                                        const TreePtr& target,
                                        const ExtractOptions& opts) {
  std::vector<ConcreteEdit> out;
  for (const EditComponent& comp : components(script)) {
    if (comp.edit_indices.size() > opts.max_component_edits) continue;
    if (auto edit = lift(comp, source, target, script.mapping))
      out.push_back(std::move(*edit));
  }
  return out;
}

}  // namespace editmine
