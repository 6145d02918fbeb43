// End-to-end acceptance checks. One line per criterion; exit is nonzero iff
// any printed line says FAIL. Limits are pinned here, not configurable.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "editmine/catalog.hpp"
#include "editmine/cluster.hpp"
#include "editmine/diff.hpp"
#include "editmine/ingest.hpp"
#include "editmine/sexpr.hpp"
#include "support/corpus.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace editmine;
using namespace editmine::testing;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kFig1LimitMs = 1000.0;
constexpr double kSoundnessLimitMs = 30'000.0;
constexpr double kIffLimitMs = 300'000.0;
constexpr double kThroughputLimitMs = 60'000.0;

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f ms", ms);
  return buf;
}

// hole-naming-independent fingerprint of a rewrite rule
std::string rule_key(const EditPattern& p) {
  return serialize_ast_text(canonical_holes(p.before_template)) + " => " +
         serialize_ast_text(after_with_shared_holes(p));
}

bool replay_cluster(const Cluster& c, Outcome& out, const char* tag) {
  for (const ConcreteEdit& m : c.members) {
    auto r = apply_pattern(c.pattern, m.before);
    if (!r || !structurally_equal(*r, m.after)) {
      out.fail(std::string(tag) + ": member does not replay under " +
               rule_key(c.pattern));
      return false;
    }
  }
  return true;
}

// ---- criterion 1: the three swap edits, two projects, one mined rule ----

Outcome criterion1() {
  Outcome out;
  auto start = Clock::now();
  TempDir tmp;
  write_pairs_case(tmp.path() / "p1", "001", wrap_stmt(swap_before("--launchdiag")),
                   wrap_stmt(swap_after("--launchdiag")));
  write_pairs_case(tmp.path() / "p1", "002", wrap_stmt(swap_before("--noclasspath")),
                   wrap_stmt(swap_after("--noclasspath")));
  write_pairs_case(tmp.path() / "p2", "001", wrap_stmt(swap_before("-noclasspath")),
                   wrap_stmt(swap_after("-noclasspath")));

  PairsDirectorySource s1((tmp.path() / "p1").string());
  PairsDirectorySource s2((tmp.path() / "p2").string());
  std::vector<RevisionSource*> sources = {&s1, &s2};
  SexprParserAdapter parser;
  auto clusters = mine(sources, parser);

  size_t multi = 0;
  const Cluster* found = nullptr;
  for (const auto& c : clusters)
    if (c.members.size() > 1) {
      ++multi;
      found = &c;
    }
  if (multi != 1) out.fail("expected one repeated pattern, got " + std::to_string(multi));
  if (found) {
    if (rule_key(found->pattern) != rule_key(swap_pattern("equals")))
      out.fail("wrong pattern: " + rule_key(found->pattern));
    if (found->members.size() != 3)
      out.fail("expected 3 member edits, got " + std::to_string(found->members.size()));
    auto cat = filter_catalog(aggregate(clusters), 2, 2, true);
    if (cat.entries.size() != 1 || cat.entries[0].project_count != 2)
      out.fail("catalog should hold the rule with project_count 2");
  }
  double elapsed = ms_since(start);
  if (elapsed >= kFig1LimitMs) out.fail("took " + fmt_ms(elapsed));
  out.detail = "3 edits -> " + std::to_string(clusters.size()) + " clusters, " +
               fmt_ms(elapsed);
  return out;
}

// ---- criterion 2: three pinned worked values ----

Outcome criterion2() {
  Outcome out;
  // depth-1 cap of the swap call site: receiver.method(argument)
  auto capped = dcap(swap_before("--launchdiag"), 1);
  if (serialize_ast_text(capped) != "(call ?1 ?2 ?3)")
    out.fail("d-cap mismatch: " + serialize_ast_text(capped));

  // input-side cost of merging the first two swap edits is 2 - 1 = 1
  auto g = au2(swap_before("--launchdiag"), swap_before("--noclasspath"));
  auto holes = holes_of(g.tmpl);
  size_t input_cost = 0;
  for (int h : holes)
    input_cost += tree_size(g.alpha1.at(h)) + tree_size(g.alpha2.at(h));
  input_cost -= holes.size();
  if (input_cost != 1) out.fail("input-side cost " + std::to_string(input_cost));

  // the mixed set (swap vs literal replacement) admits no single rule
  std::vector<ConcreteEdit> mixed = {
      {swap_before("--launchdiag"), swap_after("--launchdiag"), {}},
      {swap_before("--noclasspath"), swap_after("-main"), {}},
  };
  if (learn_pattern(mixed)) out.fail("inconsistent set produced a rule");

  out.detail = "d-cap, unit cost and inconsistency check out";
  return out;
}

// ---- criterion 3: apply(diff(a,b), a) == b on random pairs ----

Outcome criterion3() {
  Outcome out;
  auto start = Clock::now();
  std::mt19937 rng(33550336);
  Alphabet a{{"call", "index", "block", "if", "id", "name", "lit:int"},
             {"x", "y", "z", "w"},
             4,
             true};
  const int rounds = 1000;
  int checked = 0;
  for (int i = 0; i < rounds; ++i) {
    TreePtr s = random_tree(rng, 30, a);
    TreePtr t = (i % 2 == 0) ? mutate(rng, s, a) : random_tree(rng, 30, a);
    auto script = diff(s, t);
    TreePtr result;
    try {
      result = editmine::apply(script, s);
    } catch (const ApplyError& e) {
      out.fail(std::string("apply threw: ") + e.what());
      break;
    }
    if (!structurally_equal(result, t)) {
      out.fail("apply(diff(s,t), s) != t for s=" + serialize_ast_text(s) +
               " t=" + serialize_ast_text(t));
      break;
    }
    ++checked;
  }
  double elapsed = ms_since(start);
  if (elapsed >= kSoundnessLimitMs) out.fail("took " + fmt_ms(elapsed));
  out.detail = std::to_string(checked) + " pairs, " + fmt_ms(elapsed);
  return out;
}

// ---- criterion 4: au2 against the brute-force least general template ----

Outcome criterion4() {
  Outcome out;
  auto start = Clock::now();
  size_t pairs = 0;
  auto check_pair = [&](const TreePtr& t1, const TreePtr& t2) {
    Generalization2 g = au2(t1, t2);
    if (!structurally_equal(substitute(g.tmpl, g.alpha1), t1) ||
        !structurally_equal(substitute(g.tmpl, g.alpha2), t2)) {
      out.fail("substitutions do not reinstantiate " + serialize_ast_text(t1) +
               " / " + serialize_ast_text(t2));
      return false;
    }
    TreePtr want = brute_lgg(t1, t2);
    if (!structurally_equal(canonical_holes(g.tmpl), want)) {
      out.fail("template " + serialize_ast_text(g.tmpl) + " != oracle " +
               serialize_ast_text(want) + " on " + serialize_ast_text(t1) +
               " / " + serialize_ast_text(t2));
      return false;
    }
    ++pairs;
    return true;
  };

  // exhaustive over the full alphabet at small size
  Alphabet wide{{"f", "g", "h"}, {"x", "y", "z"}, 4, true};
  auto small = enumerate_trees(3, wide);
  for (const auto& t1 : small)
    for (const auto& t2 : small)
      if (!check_pair(t1, t2)) return out;

  // exhaustive to six nodes over a narrow alphabet
  Alphabet narrow{{"f"}, {"x"}, 2, true};
  auto deep = enumerate_trees(6, narrow);
  for (const auto& t1 : deep)
    for (const auto& t2 : deep)
      if (!check_pair(t1, t2)) return out;

  // randomized mid-size pairs over the full alphabet
  std::mt19937 rng(8128);
  for (int i = 0; i < 2000; ++i)
    if (!check_pair(random_tree(rng, 6, wide), random_tree(rng, 6, wide))) return out;

  out.detail = std::to_string(pairs) + " pairs (" + std::to_string(small.size()) +
               "^2 wide, " + std::to_string(deep.size()) + "^2 narrow, 2000 random), " +
               fmt_ms(ms_since(start));
  return out;
}

// ---- criterion 5: learn_pattern succeeds iff a consistent rule exists ----

Outcome criterion5() {
  Outcome out;
  auto start = Clock::now();
  size_t sets = 0, rules = 0;

  auto check_set = [&](const std::vector<ConcreteEdit>& edits) {
    std::optional<EditPattern> p = learn_pattern(edits);
    bool want = brute_rule_exists(edits);
    if (p.has_value() != want) {
      std::string dump;
      for (const auto& e : edits)
        dump += " [" + serialize_ast_text(e.before) + " -> " +
                serialize_ast_text(e.after) + "]";
      out.fail(std::string("learned=") + (p ? "yes" : "no") + " oracle=" +
               (want ? "yes" : "no") + " on" + dump);
      return false;
    }
    if (p) {
      ++rules;
      for (const auto& e : edits) {
        auto r = apply_pattern(*p, e.before);
        if (!r || !structurally_equal(*r, e.after)) {
          out.fail("learned rule does not replay its own edits");
          return false;
        }
      }
    }
    ++sets;
    return true;
  };

  // every single edit and every unordered pair over a tiny universe
  Alphabet tiny{{"f", "g"}, {"x", "y"}, 2, true};
  auto pool2 = enumerate_trees(2, tiny);
  std::vector<ConcreteEdit> universe;
  for (const auto& i : pool2)
    for (const auto& o : pool2)
      if (!structurally_equal(i, o)) universe.push_back({i, o, {}});
  for (const auto& e : universe)
    if (!check_set({e})) return out;
  for (size_t i = 0; i < universe.size(); ++i)
    for (size_t j = i + 1; j < universe.size(); ++j)
      if (!check_set({universe[i], universe[j]})) return out;

  // every triple over a handful of five-node shapes
  std::vector<TreePtr> pool5 = {
      parse_ast_text(R"((f (g (id "x")) (id "y")))"),
      parse_ast_text(R"((f (g (id "y")) (id "x")))"),
      parse_ast_text(R"((f (g (id "x")) (id "x")))"),
      parse_ast_text(R"((f (id "x") (g (id "y"))))"),
      parse_ast_text(R"((g (f (id "x")) (id "y")))"),
      parse_ast_text(R"((f (id "y")))"),
  };
  std::vector<ConcreteEdit> edits5;
  for (const auto& i : pool5)
    for (const auto& o : pool5)
      if (!structurally_equal(i, o)) edits5.push_back({i, o, {}});
  for (size_t i = 0; i < edits5.size(); ++i)
    for (size_t j = i + 1; j < edits5.size(); ++j)
      for (size_t k = j + 1; k < edits5.size(); ++k)
        if (!check_set({edits5[i], edits5[j], edits5[k]})) return out;

  // randomized sets over the full alphabet
  Alphabet wide{{"f", "g", "h"}, {"x", "y", "z"}, 3, true};
  std::mt19937 rng(496);
  for (int i = 0; i < 20000; ++i) {
    std::vector<ConcreteEdit> edits;
    size_t n = 1 + rng() % 3;
    for (size_t k = 0; k < n; ++k) {
      TreePtr before = random_tree(rng, 5, wide);
      edits.push_back({before, mutate(rng, before, wide), {}});
    }
    if (!check_set(edits)) return out;
  }

  double elapsed = ms_since(start);
  if (elapsed >= kIffLimitMs) out.fail("took " + fmt_ms(elapsed));
  out.detail = std::to_string(sets) + " edit sets, " + std::to_string(rules) +
               " rules found, " + fmt_ms(elapsed);
  return out;
}

// ---- criterion 6: every emitted cluster replays all its members ----

Outcome criterion6() {
  Outcome out;
  size_t clusters_checked = 0;

  {  // the planted corpus end to end
    TempDir tmp;
    auto plan = plant_corpus(tmp.path(), 30);
    std::vector<PairsDirectorySource> owned;
    owned.reserve(plan.projects.size());
    for (const auto& dir : plan.projects) owned.emplace_back(dir.string());
    std::vector<RevisionSource*> sources;
    for (auto& s : owned) sources.push_back(&s);
    SexprParserAdapter parser;
    for (const auto& c : mine(sources, parser)) {
      if (!replay_cluster(c, out, "planted")) return out;
      ++clusters_checked;
    }
  }

  {  // random edit streams straight into the clusterer
    std::mt19937 rng(2026);
    Alphabet a{{"f", "g", "id", "call"}, {"x", "y", "z"}, 3, true};
    for (int round = 0; round < 60; ++round) {
      std::vector<ConcreteEdit> edits;
      size_t n = 2 + rng() % 18;
      for (size_t k = 0; k < n; ++k) {
        TreePtr before = random_tree(rng, 6, a);
        edits.push_back({before, mutate(rng, before, a), {}});
      }
      for (const auto& c : cluster_all(edits)) {
        if (!replay_cluster(c, out, "random")) return out;
        ++clusters_checked;
      }
    }
  }

  out.detail = std::to_string(clusters_checked) + " clusters replayed";
  return out;
}

// ---- criterion 7: planted rules come back exactly ----

Outcome criterion7() {
  Outcome out;
  TempDir tmp;
  auto plan = plant_corpus(tmp.path(), 30);

  std::vector<PairsDirectorySource> owned;
  owned.reserve(plan.projects.size());
  for (const auto& dir : plan.projects) owned.emplace_back(dir.string());
  std::vector<RevisionSource*> sources;
  for (auto& s : owned) sources.push_back(&s);
  SexprParserAdapter parser;
  auto clusters = mine(sources, parser);

  auto cov = report_coverage(clusters);
  if (cov.total_edits != plan.total_edits())
    out.fail("total edits " + std::to_string(cov.total_edits) + " != " +
             std::to_string(plan.total_edits()));
  if (cov.covered_edits != plan.covered_edits())
    out.fail("covered edits " + std::to_string(cov.covered_edits) + " != " +
             std::to_string(plan.covered_edits()));

  // default thresholds: the planted rules span all three projects
  auto cat = filter_catalog(aggregate(clusters));
  if (cat.entries.size() != plan.patterns.size())
    out.fail("filtered catalog has " + std::to_string(cat.entries.size()) +
             " entries, planted " + std::to_string(plan.patterns.size()));

  std::vector<std::string> want;
  for (const auto& p : plan.patterns) want.push_back(rule_key(p));
  std::vector<size_t> want_counts(plan.instances);
  std::sort(want.begin(), want.end());
  std::sort(want_counts.begin(), want_counts.end());

  std::vector<std::string> got;
  std::vector<size_t> got_counts;
  for (const auto& e : cat.entries) {
    got.push_back(rule_key(e.pattern));
    got_counts.push_back(e.edit_count);
    if (e.project_count != plan.projects.size())
      out.fail("entry not cross-project: " + rule_key(e.pattern));
  }
  std::sort(got.begin(), got.end());
  std::sort(got_counts.begin(), got_counts.end());
  if (got != want) out.fail("recovered rule set differs from the planted one");
  if (got_counts != want_counts) out.fail("instance counts differ");

  out.detail = std::to_string(cat.entries.size()) + " rules, coverage " +
               std::to_string(cov.covered_edits) + "/" +
               std::to_string(cov.total_edits);
  return out;
}

// ---- criterion 8: 100 revision pairs mine quickly ----

Outcome criterion8() {
  Outcome out;
  TempDir tmp;
  std::mt19937 rng(1729);
  throughput_corpus(tmp.path() / "repo", 100, rng);

  auto start = Clock::now();
  PairsDirectorySource src((tmp.path() / "repo").string());
  SexprParserAdapter parser;
  MineOptions opts;
  auto clusters = mine(src, parser, opts);
  double elapsed = ms_since(start);

  size_t total = 0;
  for (const auto& c : clusters) total += c.members.size();
  if (total != 100) out.fail("expected 100 edits, got " + std::to_string(total));
  if (elapsed >= kThroughputLimitMs) out.fail("took " + fmt_ms(elapsed));
  out.detail = "100 pairs -> " + std::to_string(clusters.size()) + " clusters, " +
               fmt_ms(elapsed);
  return out;
}

}  // namespace

int main() {
  struct Row {
    int number;
    const char* title;
    Outcome (*run)();
  };
  const Row rows[] = {
      {1, "swap-edit corpus mines to the one expected rule", criterion1},
      {2, "pinned worked values", criterion2},
      {3, "edit scripts reproduce their targets", criterion3},
      {4, "anti-unification matches the brute-force oracle", criterion4},
      {5, "rule learning succeeds exactly when a rule exists", criterion5},
      {6, "clusters replay their members", criterion6},
      {7, "planted patterns are recovered exactly", criterion7},
      {8, "hundred-pair corpus mines inside the budget", criterion8},
  };

  bool all_pass = true;
  for (const Row& row : rows) {
    Outcome out;
    try {
      out = row.run();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    std::printf("criterion %d: %s - %s (%s)\n", row.number,
                out.pass ? "PASS" : "FAIL", row.title, out.detail.c_str());
    if (!out.pass) all_pass = false;
  }
  std::printf(
      "criterion 9: EXCLUDED - full-corpus statistics and human-study results "
      "need the original large-scale corpus; repetition, soundness and "
      "recovery are covered at desk scale by criteria 3-7\n");
  return all_pass ? 0 : 1;
}
