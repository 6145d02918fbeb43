#include "editmine/pattern.hpp"

#include <stdexcept>

namespace editmine {

std::optional<EditPattern> learn_pattern(std::span<const ConcreteEdit> edits) {
  if (edits.empty()) throw std::invalid_argument("learn_pattern on no edits");
  std::vector<TreePtr> befores, afters;
  befores.reserve(edits.size());
  afters.reserve(edits.size());
  for (const ConcreteEdit& e : edits) {
    befores.push_back(e.before);
    afters.push_back(e.after);
  }
  GeneralizationN gi = au_many(befores);
  GeneralizationN go = au_many(afters);

  EditPattern p;
  p.before_template = gi.tmpl;
  p.after_template = go.tmpl;
  std::vector<int> before_holes = holes_of(gi.tmpl);
  for (int ho : holes_of(go.tmpl)) {
    bool found = false;
    for (int hi : before_holes) {
      bool all_equal = true;
      for (size_t k = 0; k < edits.size(); ++k) {
        if (!structurally_equal(go.alphas[k].at(ho), gi.alphas[k].at(hi))) {
          all_equal = false;
          break;
        }
      }
      if (all_equal) {
        p.hole_map.emplace(ho, hi);
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  if (gi.tmpl->is_hole() && go.tmpl->is_hole()) return std::nullopt;
  for (const ConcreteEdit& e : edits) p.support.push_back(e.origin);
  return p;
}

std::optional<TreePtr> apply_pattern(const EditPattern& p, const TreePtr& t) {
  std::optional<Substitution> alpha = match(p.before_template, t);
  if (!alpha) return std::nullopt;
  Substitution beta;
  for (const auto& [ho, hi] : p.hole_map) beta.emplace(ho, alpha->at(hi));
  return substitute(p.after_template, beta);
}

namespace {

std::optional<std::string> anchor_label(const TreePtr& t,
                                        const AnchorPolicy& policy) {
  auto it = policy.anchor_child_kind.find(t->kind());
  if (it == policy.anchor_child_kind.end()) return std::nullopt;
  for (const TreePtr& c : t->children())
    if (c->kind() == it->second && c->label()) return c->label();
  return std::nullopt;
}

}  // namespace

bool anchors_compatible(const ConcreteEdit& a, const ConcreteEdit& b,
                        const AnchorPolicy& policy) {
  std::optional<std::string> la = anchor_label(a.before, policy);
  std::optional<std::string> lb = anchor_label(b.before, policy);
  return !la || !lb || *la == *lb;
}

TreePtr after_with_shared_holes(const EditPattern& p) {
  Substitution rename;
  for (const auto& [ho, hi] : p.hole_map) rename.emplace(ho, Tree::hole(hi));
  return substitute(p.after_template, rename);
}

}  // namespace editmine
