#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "editmine/catalog.hpp"
#include "editmine/ingest.hpp"
#include "editmine/log.hpp"
#include "editmine/sexpr.hpp"

namespace {

using namespace editmine;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

// "-" or empty means stdout.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << text;
  if (!out) throw IoError("cannot write " + out_path);
}

PatternCatalog load_catalog(const std::string& path) {
  return import_catalog(slurp(path));
}

// Rewrite the outermost matching subtree, once.
std::optional<TreePtr> rewrite_once(const EditPattern& p, const TreePtr& t) {
  if (auto r = apply_pattern(p, t)) return r;
  const auto& kids = t->children();
  for (size_t i = 0; i < kids.size(); ++i) {
    if (auto r = rewrite_once(p, kids[i])) {
      std::vector<TreePtr> nk(kids.begin(), kids.end());
      nk[i] = *r;
      return Tree::node(t->kind(), std::move(nk), t->span());
    }
  }
  return std::nullopt;
}

struct MineArgs {
  std::vector<std::string> repos;
  int dcap_depth = 1;
  size_t min_projects = 3;
  size_t min_edits = 2;
  bool keep_spurious = false;
  std::string out;
  int workers = 1;
};

int run_mine(const MineArgs& a) {
  std::vector<std::unique_ptr<RevisionSource>> owned;
  std::vector<RevisionSource*> sources;
  for (const auto& repo : a.repos) {
    owned.push_back(open_source(repo));
    sources.push_back(owned.back().get());
  }
  SexprParserAdapter parser;
  MineOptions mo;
  mo.dcap_depth = a.dcap_depth;
  mo.workers = a.workers;
  auto clusters = mine(sources, parser, mo);

  auto cov = report_coverage(clusters);
  log_info("clusters: " + std::to_string(clusters.size()) + ", edits in repeated clusters: " +
           std::to_string(cov.covered_edits) + "/" + std::to_string(cov.total_edits));

  CatalogMeta meta;
  meta.dcap_depth = a.dcap_depth;
  meta.min_projects = a.min_projects;
  meta.min_edits = a.min_edits;
  meta.drop_spurious = !a.keep_spurious;
  meta.tool_version = EDITMINE_VERSION;
  emit(a.out, export_catalog(filter_catalog(aggregate(clusters, meta))));
  return 0;
}

struct FilterArgs {
  std::string catalog;
  size_t min_projects = 3;
  size_t min_edits = 2;
  bool keep_spurious = false;
  std::string out;
};

int run_filter(const FilterArgs& a) {
  auto cat = load_catalog(a.catalog);
  emit(a.out, export_catalog(
                  filter_catalog(cat, a.min_projects, a.min_edits, !a.keep_spurious)));
  return 0;
}

int run_render(const std::string& catalog, const std::string& out) {
  emit(out, export_catalog(load_catalog(catalog), CatalogFormat::rule_text));
  return 0;
}

int run_apply(const std::string& catalog, const std::string& file, const std::string& out) {
  auto cat = load_catalog(catalog);
  TreePtr t = parse_ast_text(slurp(file));
  bool hit = false;
  for (size_t i = 0; i < cat.entries.size() && !hit; ++i) {
    if (auto r = rewrite_once(cat.entries[i].pattern, t)) {
      log_info("pattern " + std::to_string(i + 1) + " applied: " +
               render_template(cat.entries[i].pattern.before_template));
      t = *r;
      hit = true;
    }
  }
  if (!hit) log_warn("no pattern in " + catalog + " matches " + file);
  emit(out, serialize_ast_text(t) + "\n");
  return 0;
}

int run_stats(const std::string& catalog) {
  auto cat = load_catalog(catalog);
  size_t total = 0, covered = 0;
  std::set<std::string> projects;
  for (const CatalogEntry& e : cat.entries) {
    total += e.edit_count;
    if (e.edit_count >= 2) covered += e.edit_count;
    projects.insert(e.projects.begin(), e.projects.end());
  }
  std::ostringstream out;
  out << "patterns: " << cat.entries.size() << "\n";
  out << "edits: " << total << "\n";
  out << "projects: " << projects.size() << "\n";
  out << "coverage: " << covered << "/" << total;
  if (total > 0) {
    CoverageReport r{total, covered};
    out << " (" << static_cast<int>(r.fraction() * 100.0 + 0.5) << "%)";
  }
  out << "\n";
  std::cout << out.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mine repetitive before/after edit patterns from revision histories"};
  app.set_version_flag("--version", std::string(EDITMINE_VERSION));
  app.require_subcommand(1);

  MineArgs mine_args;
  auto* mine_cmd = app.add_subcommand("mine", "mine repositories into a pattern catalog");
  mine_cmd->add_option("repos", mine_args.repos, "git repositories or pairs directories")
      ->required();
  mine_cmd->add_option("--d-cap-depth", mine_args.dcap_depth, "clustering index depth")
      ->check(CLI::PositiveNumber);
  mine_cmd->add_option("--min-projects", mine_args.min_projects,
                       "keep patterns seen in at least this many projects");
  mine_cmd->add_option("--min-edits", mine_args.min_edits,
                       "keep patterns backed by at least this many edits");
  mine_cmd->add_flag("--keep-spurious", mine_args.keep_spurious,
                     "keep identifier renames and hole-to-hole rules");
  mine_cmd->add_option("--out", mine_args.out, "output file (default stdout)");
  mine_cmd->add_option("--workers", mine_args.workers, "worker threads")
      ->check(CLI::PositiveNumber);

  FilterArgs filter_args;
  auto* filter_cmd = app.add_subcommand("filter", "re-filter an existing catalog");
  filter_cmd->add_option("catalog", filter_args.catalog, "catalog file")->required();
  filter_cmd->add_option("--min-projects", filter_args.min_projects, "project threshold");
  filter_cmd->add_option("--min-edits", filter_args.min_edits, "edit threshold");
  filter_cmd->add_flag("--keep-spurious", filter_args.keep_spurious,
                       "keep identifier renames and hole-to-hole rules");
  filter_cmd->add_option("--out", filter_args.out, "output file (default stdout)");

  std::string render_catalog_path, render_out;
  auto* render_cmd = app.add_subcommand("render", "print a catalog as before/after rules");
  render_cmd->add_option("catalog", render_catalog_path, "catalog file")->required();
  render_cmd->add_option("--out", render_out, "output file (default stdout)");

  std::string apply_catalog_path, apply_file, apply_out;
  auto* apply_cmd =
      app.add_subcommand("apply", "rewrite one tree with the first matching pattern");
  apply_cmd->add_option("catalog", apply_catalog_path, "catalog file")->required();
  apply_cmd->add_option("file", apply_file, "serialized AST file")->required();
  apply_cmd->add_option("--out", apply_out, "output file (default stdout)");

  std::string stats_catalog_path;
  auto* stats_cmd = app.add_subcommand("stats", "coverage and size of a catalog");
  stats_cmd->add_option("catalog", stats_catalog_path, "catalog file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (mine_cmd->parsed()) return run_mine(mine_args);
    if (filter_cmd->parsed()) return run_filter(filter_args);
    if (render_cmd->parsed()) return run_render(render_catalog_path, render_out);
    if (apply_cmd->parsed()) return run_apply(apply_catalog_path, apply_file, apply_out);
    if (stats_cmd->parsed()) return run_stats(stats_catalog_path);
  } catch (const IoError& e) {
    log_error(e.what());
    return 2;
  } catch (const ParseError& e) {
    log_error(e.what());
    return 2;
  }
  return 0;
}
