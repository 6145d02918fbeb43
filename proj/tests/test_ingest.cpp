#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "editmine/ingest.hpp"
#include "editmine/sexpr.hpp"
#include "support/corpus.hpp"

using namespace editmine;
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

void sh(const std::string& cmd) {
  REQUIRE(std::system((cmd + " >/dev/null 2>&1").c_str()) == 0);
}

std::string swap_case_text(const std::string& s, bool after) {
  auto t = testing::wrap_stmt(after ? testing::swap_after(s)
                                    : testing::swap_before(s));
  return serialize_ast_text(t) + "\n";
}

}  // namespace

TEST_CASE("a pairs directory turns case folders into revision pairs") {
  testing::TempDir tmp;
  fs::path proj = tmp.path() / "alpha";
  testing::write_pairs_case(proj, "001", testing::swap_before("--a"),
                            testing::swap_after("--a"));
  testing::write_pairs_case(proj, "002", testing::swap_before("--b"),
                            testing::swap_after("--b"));
  write_text(proj / "003" / "before.ast", "(id \"orphan\")\n");  // no after

  PairsDirectorySource src(proj.string());
  CHECK(src.project_id() == "alpha");
  auto deltas = src.deltas();
  REQUIRE(deltas.size() == 2);
  CHECK(deltas[0].commit == "001");
  CHECK(deltas[1].commit == "002");
  REQUIRE(deltas[0].files.size() == 1);
  CHECK(deltas[0].files[0].path == "001/after.ast");

  SexprParserAdapter parser;
  auto records = walk(src, parser);
  REQUIRE(records.size() == 2);
  CHECK(records[0].project == "alpha");
  CHECK(records[0].commit == "001");
  CHECK(structurally_equal(records[0].before, testing::swap_before("--a")));
  CHECK(structurally_equal(records[1].after, testing::swap_after("--b")));
}

TEST_CASE("walk skips what it cannot diff and keeps the rest") {
  testing::TempDir tmp;
  fs::path proj = tmp.path() / "beta";
  testing::write_pairs_case(proj, "ok", testing::swap_before("--a"),
                            testing::swap_after("--a"));
  write_text(proj / "broken" / "before.ast", "(((\n");
  write_text(proj / "broken" / "after.ast", "(id \"fine\")\n");
  write_text(proj / "holey" / "before.ast", "(f ?1)\n");
  write_text(proj / "holey" / "after.ast", "(f (id \"x\"))\n");

  PairsDirectorySource src(proj.string());
  CHECK(src.deltas().size() == 3);  // layout-complete cases all surface
  SexprParserAdapter parser;
  auto records = walk(src, parser);
  REQUIRE(records.size() == 1);
  CHECK(records[0].commit == "ok");
}

TEST_CASE("missing directories are an error, empty ones are not") {
  testing::TempDir tmp;
  PairsDirectorySource missing((tmp.path() / "nope").string());
  CHECK_THROWS_AS(missing.deltas(), IoError);

  fs::create_directories(tmp.path() / "empty");
  PairsDirectorySource empty((tmp.path() / "empty").string());
  CHECK(empty.deltas().empty());
}

TEST_CASE("git histories yield one delta per consecutive mainline pair") {
  testing::TempDir tmp;
  fs::path repo = tmp.path() / "gamma";
  fs::create_directories(repo);
  std::string g = "git -C '" + repo.string() + "' ";
  sh(g + "init -q");
  sh(g + "config user.email t@example.com");
  sh(g + "config user.name t");

  write_text(repo / "f.ast", swap_case_text("--a", false));
  write_text(repo / "notes.txt", "v1\n");
  sh(g + "add -A && " + g + "commit -qm one");

  write_text(repo / "f.ast", swap_case_text("--a", true));
  write_text(repo / "notes.txt", "v2\n");
  sh(g + "add -A && " + g + "commit -qm two");

  write_text(repo / "f.ast", swap_case_text("--b", false));
  write_text(repo / "new.ast", "(id \"added\")\n");  // added, not modified
  sh(g + "add -A && " + g + "commit -qm three");

  GitRevisionSource src(repo.string());
  CHECK(src.project_id() == "gamma");
  auto deltas = src.deltas();
  REQUIRE(deltas.size() == 2);
  CHECK(deltas[0].commit.size() == 40);
  REQUIRE(deltas[0].files.size() == 2);  // f.ast and notes.txt both modified
  REQUIRE(deltas[1].files.size() == 1);  // new.ast is an addition
  CHECK(deltas[1].files[0].path == "f.ast");

  SexprParserAdapter parser;
  auto records = walk(src, parser);  // notes.txt is not claimed
  REQUIRE(records.size() == 2);
  CHECK(structurally_equal(records[0].before,
                           testing::wrap_stmt(testing::swap_before("--a"))));
  CHECK(structurally_equal(records[0].after,
                           testing::wrap_stmt(testing::swap_after("--a"))));

  SUBCASE("open_source tells the layouts apart") {
    auto by_git = open_source(repo.string());
    CHECK(dynamic_cast<GitRevisionSource*>(by_git.get()) != nullptr);
    fs::path pairs = tmp.path() / "plain";
    fs::create_directories(pairs);
    auto by_dir = open_source(pairs.string());
    CHECK(dynamic_cast<PairsDirectorySource*>(by_dir.get()) != nullptr);
    CHECK_THROWS_AS(open_source((tmp.path() / "absent").string()), IoError);
  }
}

TEST_CASE("mine lifts, groups and clusters across projects") {
  testing::TempDir tmp;
  fs::path p1 = tmp.path() / "p1";
  fs::path p2 = tmp.path() / "p2";
  testing::write_pairs_case(p1, "001",
                            testing::wrap_stmt(testing::swap_before("--launchdiag")),
                            testing::wrap_stmt(testing::swap_after("--launchdiag")));
  testing::write_pairs_case(p1, "002",
                            testing::wrap_stmt(testing::swap_before("--noclasspath")),
                            testing::wrap_stmt(testing::swap_after("--noclasspath")));
  testing::write_pairs_case(p2, "001",
                            testing::wrap_stmt(testing::swap_before("-noclasspath")),
                            testing::wrap_stmt(testing::swap_after("-noclasspath")));

  PairsDirectorySource s1(p1.string()), s2(p2.string());
  std::vector<RevisionSource*> sources = {&s1, &s2};
  SexprParserAdapter parser;
  auto clusters = mine(sources, parser);
  REQUIRE(clusters.size() == 1);
  const Cluster& c = clusters[0];
  REQUIRE(c.members.size() == 3);
  CHECK(serialize_ast_text(c.pattern.before_template) ==
        R"((call (index (id "args") (id "i")) (name "equals") ?1))");
  CHECK(serialize_ast_text(c.pattern.after_template) ==
        R"((call ?1 (name "equals") (index (id "args") (id "i"))))");
  CHECK(c.members[0].origin.project == "p1");
  CHECK(c.members[0].origin.commit == "001");
  CHECK(c.members[0].origin.path == "001/after.ast");
  CHECK(c.members[2].origin.project == "p2");
  REQUIRE(c.pattern.support.size() == 3);
  CHECK(c.pattern.support[1].commit == "002");
}

TEST_CASE("planted rules come back with every edit accounted for" *
          doctest::timeout(300)) {
  testing::TempDir tmp;
  auto plan = testing::plant_corpus(tmp.path(), 9);

  std::vector<PairsDirectorySource> owned;
  owned.reserve(plan.projects.size());
  for (const auto& dir : plan.projects) owned.emplace_back(dir.string());
  std::vector<RevisionSource*> sources;
  for (auto& s : owned) sources.push_back(&s);

  SexprParserAdapter parser;
  MineOptions opts;
  auto clusters = mine(sources, parser, opts);

  size_t total = 0, multi = 0;
  for (const auto& c : clusters) {
    total += c.members.size();
    if (c.members.size() > 1) ++multi;
  }
  CHECK(total == plan.total_edits());
  CHECK(multi == plan.patterns.size());

  SUBCASE("worker count changes nothing") {
    MineOptions par;
    par.workers = 4;
    auto again = mine(sources, parser, par);
    REQUIRE(again.size() == clusters.size());
    for (size_t i = 0; i < again.size(); ++i) {
      CHECK(again[i].members.size() == clusters[i].members.size());
      CHECK(structurally_equal(again[i].pattern.before_template,
                               clusters[i].pattern.before_template));
    }
  }
}
