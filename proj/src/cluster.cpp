#include "editmine/cluster.hpp"

#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "editmine/antiunify.hpp"
#include "parallel.hpp"

namespace editmine {

namespace {

TreePtr dcap_rec(const TreePtr& t, int depth, int d, int& next_id) {
  if (depth >= d || t->is_leaf()) return Tree::hole(next_id++);
  std::vector<TreePtr> kids;
  kids.reserve(t->children().size());
  for (const auto& c : t->children()) kids.push_back(dcap_rec(c, depth + 1, d, next_id));
  return Tree::node(t->kind(), std::move(kids), t->span());
}

// Size of everything a generalization abstracted away, minus one per hole.
size_t side_cost(const Generalization2& g) {
  auto holes = holes_of(g.tmpl);
  size_t total = 0;
  for (int h : holes)
    total += tree_size(g.alpha1.at(h)) + tree_size(g.alpha2.at(h));
  return total - holes.size();
}

struct Extension {
  EditPattern pattern;
  std::vector<Substitution> before_subs, after_subs;
  size_t cost = 0;
};

// Can e join c? One anti-unification per side refines the templates; the
// members' bindings are carried forward by composing through the refinement,
// then the after->before hole correspondence is rebuilt over everyone.
std::optional<Extension> try_extend(const Cluster& c, const ConcreteEdit& e) {
  Generalization2 gi = au2(c.pattern.before_template, e.before);
  Generalization2 go = au2(c.pattern.after_template, e.after);
  if (gi.tmpl->is_hole() && go.tmpl->is_hole()) return std::nullopt;

  auto holes_i = holes_of(gi.tmpl);
  auto holes_o = holes_of(go.tmpl);
  size_t n = c.members.size();

  std::vector<Substitution> bsubs(n + 1), asubs(n + 1);
  for (size_t k = 0; k < n; ++k) {
    for (int h : holes_i) bsubs[k][h] = substitute(gi.alpha1.at(h), c.before_subs[k]);
    for (int h : holes_o) asubs[k][h] = substitute(go.alpha1.at(h), c.after_subs[k]);
  }
  bsubs[n] = gi.alpha2;
  asubs[n] = go.alpha2;

  std::map<int, int> hole_map;
  for (int ho : holes_o) {
    bool found = false;
    for (int hi : holes_i) {
      bool all = true;
      for (size_t k = 0; k <= n && all; ++k)
        all = structurally_equal(asubs[k].at(ho), bsubs[k].at(hi));
      if (all) {
        hole_map[ho] = hi;
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }

  Extension ext;
  ext.pattern.before_template = gi.tmpl;
  ext.pattern.after_template = go.tmpl;
  ext.pattern.hole_map = std::move(hole_map);
  ext.pattern.support = c.pattern.support;
  ext.pattern.support.push_back(e.origin);
  ext.before_subs = std::move(bsubs);
  ext.after_subs = std::move(asubs);
  ext.cost = side_cost(gi) + side_cost(go);
  return ext;
}

Cluster singleton(const ConcreteEdit& e, int dcap_depth) {
  Cluster c;
  c.members = {e};
  c.pattern.before_template = e.before;
  c.pattern.after_template = e.after;
  c.pattern.support = {e.origin};
  c.key_before = dcap(e.before, dcap_depth);
  c.key_after = dcap(e.after, dcap_depth);
  c.before_subs = {{}};
  c.after_subs = {{}};
  return c;
}

}  // namespace

TreePtr dcap(const TreePtr& t, int d) {
  if (d < 0) throw std::invalid_argument("dcap: negative depth");
  int next_id = 1;
  return dcap_rec(t, 0, d, next_id);
}

size_t cost(const ConcreteEdit& e, const Cluster& c) {
  return side_cost(au2(c.pattern.before_template, e.before)) +
         side_cost(au2(c.pattern.after_template, e.after));
}

std::vector<Cluster> cluster_bucket(std::span<const ConcreteEdit> edits,
                                    const ClusterOptions& opts) {
  std::vector<Cluster> clusters;
  for (const ConcreteEdit& e : edits) {
    int best = -1;
    size_t best_cost = 0;
    std::optional<Extension> best_ext;
    for (size_t ci = 0; ci < clusters.size(); ++ci) {
      if (!anchors_compatible(e, clusters[ci].members[0], opts.anchors)) continue;
      if (opts.candidate_checks) ++*opts.candidate_checks;
      auto ext = try_extend(clusters[ci], e);
      if (!ext) continue;
      if (best < 0 || ext->cost < best_cost) {
        best = static_cast<int>(ci);
        best_cost = ext->cost;
        best_ext = std::move(ext);
      }
    }
    if (best >= 0) {
      Cluster& c = clusters[best];
      c.members.push_back(e);
      c.pattern = std::move(best_ext->pattern);
      c.before_subs = std::move(best_ext->before_subs);
      c.after_subs = std::move(best_ext->after_subs);
    } else {
      clusters.push_back(singleton(e, opts.dcap_depth));
    }
  }
  return clusters;
}

namespace {

struct KeyHash {
  size_t operator()(const std::pair<TreePtr, TreePtr>& k) const {
    return k.first->hash() * 1000003u ^ k.second->hash();
  }
};
struct KeyEq {
  bool operator()(const std::pair<TreePtr, TreePtr>& a,
                  const std::pair<TreePtr, TreePtr>& b) const {
    return structurally_equal(a.first, b.first) && structurally_equal(a.second, b.second);
  }
};

}  // namespace

std::vector<Cluster> cluster_all(std::span<const ConcreteEdit> edits,
                                 const ClusterOptions& opts) {
  std::vector<std::vector<ConcreteEdit>> buckets;
  std::unordered_map<std::pair<TreePtr, TreePtr>, size_t, KeyHash, KeyEq> index;
  for (const ConcreteEdit& e : edits) {
    auto key = std::make_pair(dcap(e.before, opts.dcap_depth), dcap(e.after, opts.dcap_depth));
    auto [it, fresh] = index.try_emplace(std::move(key), buckets.size());
    if (fresh) buckets.emplace_back();
    buckets[it->second].push_back(e);
  }

  std::vector<std::vector<Cluster>> per_bucket(buckets.size());
  std::vector<size_t> checks(buckets.size(), 0);
  detail::run_indexed(buckets.size(), opts.workers, [&](size_t i) {
    ClusterOptions local = opts;
    local.workers = 1;
    local.candidate_checks = opts.candidate_checks ? &checks[i] : nullptr;
    per_bucket[i] = cluster_bucket(buckets[i], local);
  });
  if (opts.candidate_checks)
    for (size_t c : checks) *opts.candidate_checks += c;

  std::vector<Cluster> all;
  for (auto& v : per_bucket)
    for (auto& c : v) all.push_back(std::move(c));
  return all;
}

}  // namespace editmine
