#include "editmine/diff.hpp"

#include <algorithm>
#include <memory>
#include <unordered_map>

#include "editmine/sexpr.hpp"

namespace editmine {

std::string to_string(const TreePath& p) {
  std::string s = "[";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s.push_back(',');
    s += std::to_string(p[i]);
  }
  s.push_back(']');
  return s;
}

void NodeMapping::add(TreePath src, TreePath tgt) {
  to_source.emplace(tgt, src);
  to_target.emplace(std::move(src), std::move(tgt));
}

namespace {

std::string payload_text(const LeafPayload& p) {
  TreePtr t = p.label ? Tree::leaf(p.kind, *p.label) : Tree::leaf(p.kind);
  return serialize_ast_text(t);
}

}  // namespace

std::string to_debug_string(const TreeEdit& e) {
  switch (e.op) {
    case TreeEdit::Op::insert:
      return "insert " + payload_text(e.payload) + " -> parent " +
             to_string(e.parent) + " at " + std::to_string(e.position);
    case TreeEdit::Op::del: {
      TreePath parent(e.node.begin(), e.node.empty() ? e.node.end()
                                                     : e.node.end() - 1);
      return "delete " + to_string(e.node) + " (parent " + to_string(parent) +
             " at " + (e.node.empty() ? "-" : std::to_string(e.node.back())) +
             ")";
    }
    case TreeEdit::Op::update:
      return "update " + to_string(e.node) + " -> " + payload_text(e.payload);
    case TreeEdit::Op::move:
      return "move " + to_string(e.node) + " -> parent " + to_string(e.parent) +
             " at " + std::to_string(e.position);
  }
  return "?";
}

std::string to_debug_string(const EditScript& s) {
  std::string out;
  for (const TreeEdit& e : s.edits) {
    out += to_debug_string(e);
    out.push_back('\n');
  }
  return out;
}

namespace {

// Preorder-indexed view of a tree under the synthetic holder (index 0).
struct Flat {
  std::vector<TreePtr> node;  // [0] is null
  std::vector<int> parent;
  std::vector<int> nsize;  // subtree node count
  std::vector<int> height;
  std::vector<std::vector<int>> kids;
  std::vector<TreePath> path;
  std::vector<int> kidx;  // index within parent
  int count() const { return static_cast<int>(node.size()); }
  bool leaf(int i) const { return kids[i].empty(); }
};

Flat flatten(const TreePtr& root) {
  Flat f;
  f.node.push_back(nullptr);
  f.parent.push_back(-1);
  f.nsize.push_back(root->node_count() + 1);
  f.height.push_back(root->height() + 1);
  f.kids.emplace_back();
  f.path.push_back({});
  f.kidx.push_back(-1);

  std::vector<std::pair<TreePtr, int>> stack{{root, 0}};
  while (!stack.empty()) {
    auto [t, par] = stack.back();
    stack.pop_back();
    int id = f.count();
    int idx = static_cast<int>(f.kids[par].size());
    f.kids[par].push_back(id);
    f.node.push_back(t);
    f.parent.push_back(par);
    f.nsize.push_back(t->node_count());
    f.height.push_back(t->height());
    f.kids.emplace_back();
    TreePath p = f.path[par];
    p.push_back(idx);
    f.path.push_back(std::move(p));
    f.kidx.push_back(idx);
    for (auto it = t->children().rbegin(); it != t->children().rend(); ++it)
      stack.emplace_back(*it, id);
  }
  return f;
}

void match_subtree_pair(const Flat& S, int i, int j, std::vector<int>& msrc,
                        std::vector<int>& mtgt) {
  // Structurally equal subtrees lay out identically in preorder.
  for (int k = 0; k < S.nsize[i]; ++k) {
    msrc[i + k] = j + k;
    mtgt[j + k] = i + k;
  }
}

void phase1_topdown(const Flat& S, const Flat& T, std::vector<int>& msrc,
                    std::vector<int>& mtgt) {
  int max_h = 0;
  for (int i = 1; i < S.count(); ++i) max_h = std::max(max_h, S.height[i]);
  for (int h = max_h; h >= 2; --h) {
    std::unordered_map<uint64_t, std::vector<int>> buckets;
    for (int j = 1; j < T.count(); ++j)
      if (T.height[j] == h && mtgt[j] == -1)
        buckets[T.node[j]->hash()].push_back(j);
    if (buckets.empty()) continue;
    for (int i = 1; i < S.count(); ++i) {
      if (S.height[i] != h || msrc[i] != -1) continue;
      auto it = buckets.find(S.node[i]->hash());
      if (it == buckets.end()) continue;
      for (int j : it->second) {
        if (mtgt[j] == -1 && structurally_equal(S.node[i], T.node[j])) {
          match_subtree_pair(S, i, j, msrc, mtgt);
          break;
        }
      }
    }
  }
}

void phase2_bottomup(const Flat& S, const Flat& T, std::vector<int>& msrc,
                     std::vector<int>& mtgt) {
  std::unordered_map<std::string, std::vector<int>> tgt_by_kind;
  for (int j = 1; j < T.count(); ++j)
    if (!T.leaf(j)) tgt_by_kind[T.node[j]->kind()].push_back(j);

  // Reverse preorder visits every descendant before its ancestors.
  for (int i = S.count() - 1; i >= 1; --i) {
    if (msrc[i] != -1 || S.leaf(i)) continue;
    auto it = tgt_by_kind.find(S.node[i]->kind());
    if (it == tgt_by_kind.end()) continue;
    int best = -1;
    double best_frac = 0.5;
    for (int j : it->second) {
      if (mtgt[j] != -1) continue;
      int common = 0;
      for (int d = i + 1; d < i + S.nsize[i]; ++d)
        if (msrc[d] > j && msrc[d] < j + T.nsize[j]) ++common;
      double frac = static_cast<double>(common) /
                    (std::max(S.nsize[i], T.nsize[j]) - 1);
      if (frac > best_frac) {
        best_frac = frac;
        best = j;
      }
    }
    if (best != -1) {
      msrc[i] = best;
      mtgt[best] = i;
    }
  }
}

void phase2_recovery(const Flat& S, const Flat& T, std::vector<int>& msrc,
                     std::vector<int>& mtgt) {
  for (int i = 0; i < S.count(); ++i) {
    int j = i == 0 ? 0 : msrc[i];
    if (i != 0 && j == -1) continue;
    for (int u : S.kids[i]) {
      if (msrc[u] != -1) continue;
      for (int v : T.kids[j]) {
        if (mtgt[v] != -1) continue;
        if (S.node[u]->kind() == T.node[v]->kind() &&
            S.leaf(u) == T.leaf(v)) {
          msrc[u] = v;
          mtgt[v] = u;
          break;
        }
      }
    }
  }
}

struct WNode {
  std::string kind;
  std::optional<std::string> label;
  std::vector<std::unique_ptr<WNode>> kids;
  WNode* parent = nullptr;
  int src = -1;  // source preorder id; -1 for inserted shells
  int tgt = -1;  // kept target id (shells included); -1 = junk
  int placed = 0;
};

std::unique_ptr<WNode> build_working(const Flat& S, int i,
                                     const std::vector<int>& msrc,
                                     const std::vector<char>& keep_t,
                                     std::vector<WNode*>& by_tgt) {
  auto w = std::make_unique<WNode>();
  w->src = i;
  if (i != 0) {
    w->kind = S.node[i]->kind();
    w->label = S.node[i]->label();
  }
  int j = i == 0 ? 0 : msrc[i];
  if (j != -1 && keep_t[j]) {
    w->tgt = j;
    by_tgt[j] = w.get();
  }
  for (int u : S.kids[i]) {
    auto kid = build_working(S, u, msrc, keep_t, by_tgt);
    kid->parent = w.get();
    w->kids.push_back(std::move(kid));
  }
  return w;
}

int index_in_parent(const WNode* w) {
  const auto& ks = w->parent->kids;
  for (size_t i = 0; i < ks.size(); ++i)
    if (ks[i].get() == w) return static_cast<int>(i);
  throw std::logic_error("working tree corrupted");
}

TreePath wpath(const WNode* w) {
  TreePath p;
  while (w->parent) {
    p.push_back(index_in_parent(w));
    w = w->parent;
  }
  std::reverse(p.begin(), p.end());
  return p;
}

std::unique_ptr<WNode> detach(WNode* w) {
  WNode* par = w->parent;
  int idx = index_in_parent(w);
  auto owned = std::move(par->kids[idx]);
  par->kids.erase(par->kids.begin() + idx);
  owned->parent = nullptr;
  return owned;
}

void attach(WNode* parent, std::unique_ptr<WNode> w, int pos) {
  w->parent = parent;
  parent->kids.insert(parent->kids.begin() + pos, std::move(w));
}

}  // namespace

EditScript diff(const TreePtr& source, const TreePtr& target) {
  if (contains_holes(source) || contains_holes(target))
    throw std::invalid_argument("diff requires hole-free trees");

  Flat S = flatten(source);
  Flat T = flatten(target);
  std::vector<int> msrc(S.count(), -1), mtgt(T.count(), -1);
  msrc[0] = 0;
  mtgt[0] = 0;

  phase1_topdown(S, T, msrc, mtgt);
  phase2_bottomup(S, T, msrc, mtgt);
  phase2_recovery(S, T, msrc, mtgt);

  // A pair survives only if every target-side ancestor survives too; edits
  // never place kept nodes under nodes that do not exist yet. Mixed
  // leaf/interior pairs are dropped because a label change on them cannot be
  // expressed as a leaf update.
  std::vector<char> keep_t(T.count(), 0);
  keep_t[0] = 1;
  for (int j = 1; j < T.count(); ++j) {
    int i = mtgt[j];
    keep_t[j] = i != -1 && keep_t[T.parent[j]] &&
                S.leaf(i) == T.leaf(j);
  }

  std::vector<WNode*> by_tgt(T.count(), nullptr);
  std::unique_ptr<WNode> holder =
      build_working(S, 0, msrc, keep_t, by_tgt);

  EditScript script;
  for (int j = 1; j < T.count(); ++j)
    if (keep_t[j]) script.mapping.add(S.path[mtgt[j]], T.path[j]);

  // updates
  for (int j = 1; j < T.count(); ++j) {
    if (!keep_t[j] || !T.leaf(j)) continue;
    WNode* w = by_tgt[j];
    LeafPayload want{T.node[j]->kind(),
                     T.node[j]->label()};
    if (w->kind == want.kind && w->label == want.label) continue;
    TreeEdit e;
    e.op = TreeEdit::Op::update;
    e.node = wpath(w);
    e.payload = want;
    e.touched = {{TreeSide::source, S.path[w->src]}};
    script.edits.push_back(std::move(e));
    w->kind = want.kind;
    w->label = want.label;
  }

  // moves (and reorders)
  for (int j = 1; j < T.count(); ++j) {
    if (!keep_t[j]) continue;
    WNode* u = by_tgt[T.parent[j]];
    WNode* x = by_tgt[j];
    int desired = u->placed;
    if (x->parent == u && index_in_parent(x) == desired) {
      ++u->placed;
      continue;
    }
    TreeEdit e;
    e.op = TreeEdit::Op::move;
    e.node = wpath(x);
    e.touched = {{TreeSide::source, S.path[x->src]},
                 {TreeSide::source, S.path[x->parent->src]},
                 {TreeSide::target, T.path[T.parent[j]]}};
    auto owned = detach(x);
    e.parent = wpath(u);
    e.position = desired;
    attach(u, std::move(owned), desired);
    ++u->placed;
    script.edits.push_back(std::move(e));
  }

  // inserts, top-down
  for (int j = 1; j < T.count(); ++j) {
    if (keep_t[j]) continue;
    WNode* up = by_tgt[T.parent[j]];
    TreeEdit e;
    e.op = TreeEdit::Op::insert;
    e.parent = wpath(up);
    e.position = T.kidx[j];
    e.payload = {T.node[j]->kind(), T.node[j]->label()};
    e.touched = {{TreeSide::target, T.path[j]},
                 {TreeSide::target, T.path[T.parent[j]]}};
    auto shell = std::make_unique<WNode>();
    shell->kind = e.payload.kind;
    shell->label = e.payload.label;
    shell->tgt = j;
    by_tgt[j] = shell.get();
    attach(up, std::move(shell), e.position);
    script.edits.push_back(std::move(e));
  }

  // deletes, bottom-up
  std::vector<WNode*> junk_roots;
  {
    std::vector<WNode*> stack{holder.get()};
    while (!stack.empty()) {
      WNode* w = stack.back();
      stack.pop_back();
      if (w->tgt == -1) {
        junk_roots.push_back(w);
        continue;
      }
      for (auto it = w->kids.rbegin(); it != w->kids.rend(); ++it)
        stack.push_back(it->get());
    }
  }
  for (WNode* r : junk_roots) {
    std::vector<WNode*> post;
    std::vector<WNode*> stack{r};
    while (!stack.empty()) {
      WNode* w = stack.back();
      stack.pop_back();
      post.push_back(w);
      for (const auto& k : w->kids) stack.push_back(k.get());
    }
    std::reverse(post.begin(), post.end());  // children before parents
    for (WNode* w : post) {
      TreeEdit e;
      e.op = TreeEdit::Op::del;
      e.node = wpath(w);
      e.touched = {{TreeSide::source, S.path[w->src]},
                   {TreeSide::source, S.path[S.parent[w->src]]}};
      detach(w);
      script.edits.push_back(std::move(e));
    }
  }

  return script;
}

namespace {

struct ANode {
  std::string kind;
  std::optional<std::string> label;
  std::vector<std::unique_ptr<ANode>> kids;
};

std::unique_ptr<ANode> to_anode(const TreePtr& t) {
  auto n = std::make_unique<ANode>();
  n->kind = t->kind();
  n->label = t->label();
  for (const auto& c : t->children()) n->kids.push_back(to_anode(c));
  return n;
}

TreePtr to_tree(const ANode& n) {
  if (n.kids.empty())
    return n.label ? Tree::leaf(n.kind, *n.label) : Tree::leaf(n.kind);
  std::vector<TreePtr> kids;
  kids.reserve(n.kids.size());
  for (const auto& k : n.kids) kids.push_back(to_tree(*k));
  return Tree::node(n.kind, std::move(kids));
}

ANode* resolve(ANode* root, const TreePath& p) {
  ANode* cur = root;
  for (int idx : p) {
    if (idx < 0 || static_cast<size_t>(idx) >= cur->kids.size())
      throw ApplyError("path " + to_string(p) + " does not exist");
    cur = cur->kids[idx].get();
  }
  return cur;
}

std::unique_ptr<ANode> adetach(ANode* root, const TreePath& p) {
  if (p.empty()) throw ApplyError("cannot detach the root holder");
  TreePath pp(p.begin(), p.end() - 1);
  ANode* par = resolve(root, pp);
  int idx = p.back();
  if (idx < 0 || static_cast<size_t>(idx) >= par->kids.size())
    throw ApplyError("path " + to_string(p) + " does not exist");
  auto owned = std::move(par->kids[idx]);
  par->kids.erase(par->kids.begin() + idx);
  return owned;
}

}  // namespace

TreePtr apply(std::span<const TreeEdit> edits, const TreePtr& source) {
  if (contains_holes(source))
    throw std::invalid_argument("apply requires a hole-free tree");
  ANode holder;
  holder.kids.push_back(to_anode(source));

  for (const TreeEdit& e : edits) {
    switch (e.op) {
      case TreeEdit::Op::insert: {
        ANode* par = resolve(&holder, e.parent);
        if (e.position < 0 ||
            static_cast<size_t>(e.position) > par->kids.size())
          throw ApplyError("insert position " + std::to_string(e.position) +
                           " out of range at " + to_string(e.parent));
        auto n = std::make_unique<ANode>();
        n->kind = e.payload.kind;
        n->label = e.payload.label;
        par->kids.insert(par->kids.begin() + e.position, std::move(n));
        break;
      }
      case TreeEdit::Op::del: {
        ANode* n = resolve(&holder, e.node);
        if (!n->kids.empty())
          throw ApplyError("delete of interior node at " + to_string(e.node));
        adetach(&holder, e.node);
        break;
      }
      case TreeEdit::Op::update: {
        ANode* n = resolve(&holder, e.node);
        if (!n->kids.empty())
          throw ApplyError("update of interior node at " + to_string(e.node));
        n->kind = e.payload.kind;
        n->label = e.payload.label;
        break;
      }
      case TreeEdit::Op::move: {
        auto owned = adetach(&holder, e.node);
        ANode* par = resolve(&holder, e.parent);
        if (e.position < 0 ||
            static_cast<size_t>(e.position) > par->kids.size())
          throw ApplyError("move position " + std::to_string(e.position) +
                           " out of range at " + to_string(e.parent));
        par->kids.insert(par->kids.begin() + e.position, std::move(owned));
        break;
      }
    }
  }
  if (holder.kids.size() != 1)
    throw ApplyError("script leaves " + std::to_string(holder.kids.size()) +
                     " roots");
  return to_tree(*holder.kids[0]);
}

TreePtr apply(const EditScript& script, const TreePtr& source) {
  return apply(std::span<const TreeEdit>(script.edits), source);
}

}  // namespace editmine
