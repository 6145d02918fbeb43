#include "editmine/antiunify.hpp"

#include <stdexcept>
#include <unordered_map>

namespace editmine {

namespace {

struct PairKey {
  TreePtr a, b;
};
struct PairKeyHash {
  size_t operator()(const PairKey& k) const {
    uint64_t h = k.a->hash();
    h ^= k.b->hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<size_t>(h);
  }
};
struct PairKeyEq {
  bool operator()(const PairKey& x, const PairKey& y) const {
    return structurally_equal(x.a, y.a) && structurally_equal(x.b, y.b);
  }
};

struct Au2State {
  std::unordered_map<PairKey, int, PairKeyHash, PairKeyEq> shared;
  Substitution alpha1, alpha2;
  int next_id;

  TreePtr go(const TreePtr& s1, const TreePtr& s2) {
    if (structurally_equal(s1, s2)) {
      // Keep the agreed region; holes inside it stay and bind to themselves.
      if (contains_holes(s1)) {
        for (int h : holes_of(s1)) {
          alpha1.emplace(h, Tree::hole(h));
          alpha2.emplace(h, Tree::hole(h));
        }
      }
      return s1;
    }
    if (!s1->is_hole() && !s2->is_hole() && s1->kind() == s2->kind() &&
        s1->label() == s2->label() &&
        s1->children().size() == s2->children().size()) {
      std::vector<TreePtr> kids;
      kids.reserve(s1->children().size());
      for (size_t i = 0; i < s1->children().size(); ++i)
        kids.push_back(go(s1->children()[i], s2->children()[i]));
      return Tree::node(s1->kind(), std::move(kids));
    }
    auto [it, inserted] = shared.emplace(PairKey{s1, s2}, next_id);
    if (inserted) {
      alpha1.emplace(next_id, s1);
      alpha2.emplace(next_id, s2);
      ++next_id;
    }
    return Tree::hole(it->second);
  }
};

int max_hole_id(const TreePtr& t) {
  int m = 0;
  for (int h : holes_of(t)) m = std::max(m, h);
  return m;
}

Substitution remap_keys(const Substitution& alpha,
                        const std::map<int, int>& remap) {
  Substitution out;
  for (const auto& [h, v] : alpha) {
    auto it = remap.find(h);
    if (it != remap.end()) out.emplace(it->second, v);
  }
  return out;
}

}  // namespace

Generalization2 au2(const TreePtr& t1, const TreePtr& t2) {
  Au2State st;
  st.next_id = std::max(max_hole_id(t1), max_hole_id(t2)) + 1;
  TreePtr raw = st.go(t1, t2);
  std::map<int, int> remap;
  TreePtr tmpl = canonical_holes(raw, &remap);
  return {tmpl, remap_keys(st.alpha1, remap), remap_keys(st.alpha2, remap)};
}

GeneralizationN au_many(std::span<const TreePtr> trees) {
  if (trees.empty()) throw std::invalid_argument("au_many on empty input");
  GeneralizationN g;
  g.tmpl = trees[0];
  g.alphas.emplace_back();
  for (int h : holes_of(g.tmpl)) g.alphas[0].emplace(h, Tree::hole(h));
  for (size_t i = 1; i < trees.size(); ++i) {
    Generalization2 step = au2(g.tmpl, trees[i]);
    std::vector<Substitution> next;
    next.reserve(g.alphas.size() + 1);
    for (const Substitution& prev : g.alphas) {
      Substitution composed;
      for (const auto& [h, frag] : step.alpha1)
        composed.emplace(h, substitute(frag, prev));
      next.push_back(std::move(composed));
    }
    next.push_back(std::move(step.alpha2));
    g.tmpl = std::move(step.tmpl);
    g.alphas = std::move(next);
  }
  return g;
}

}  // namespace editmine
