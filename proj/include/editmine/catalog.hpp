#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "editmine/cluster.hpp"

namespace editmine {

struct CatalogMeta {
  int dcap_depth = 1;
  size_t min_projects = 3;
  size_t min_edits = 2;
  bool drop_spurious = true;
  std::string tool_version;
};

struct CatalogEntry {
  EditPattern pattern;
  size_t edit_count = 0;
  size_t project_count = 0;          // distinct projects in the support
  std::vector<std::string> projects;  // those projects, sorted
  uint64_t pattern_hash = 0;
};

// Ranked cross-project pattern collection. Entries are totally ordered:
// project_count desc, edit_count desc, pattern hash asc.
struct PatternCatalog {
  CatalogMeta meta;
  std::vector<CatalogEntry> entries;
};

// Stable across runs and platforms: hashes the canonical serialized
// templates and the hole map, not pointers.
uint64_t pattern_hash(const EditPattern& p);

// One entry per cluster, singletons included; counts come from provenance.
PatternCatalog aggregate(std::span<const Cluster> clusters, CatalogMeta meta = {});

// Both templates are bare holes: matches anything, rewrites to itself.
bool is_vacuous(const EditPattern& p);
// The templates differ only in the label of one identifier leaf (kinds "id"
// or "name"): a variable rename, not a fix.
bool is_pure_rename(const EditPattern& p);

// Keeps entries meeting both thresholds; drop_spurious additionally removes
// vacuous and pure-rename patterns. Surviving supports are untouched.
PatternCatalog filter_catalog(const PatternCatalog& cat, size_t min_projects,
                              size_t min_edits, bool drop_spurious);
// Same, with the catalog's own meta thresholds.
PatternCatalog filter_catalog(const PatternCatalog& cat);

struct CoverageReport {
  size_t total_edits = 0;
  size_t covered_edits = 0;  // members of clusters with two or more edits
  double fraction() const {
    return total_edits == 0
               ? 0.0
               : static_cast<double>(covered_edits) / static_cast<double>(total_edits);
  }
};

// How much of the edit stream repeats: covered_edits / total_edits, kept as
// exact integers until formatted.
CoverageReport report_coverage(std::span<const Cluster> clusters);

enum class CatalogFormat {
  structured,  // line-delimited JSON, lossless, machine-readable
  rule_text,   // human-readable before/after blocks
};

std::string export_catalog(const PatternCatalog& cat,
                           CatalogFormat format = CatalogFormat::structured);

// Reads the structured format back. Throws ParseError (with the offending
// line number) on malformed input.
PatternCatalog import_catalog(const std::string& text);

// One-line rendering of a template: method calls as recv.name(args),
// indexing as a[b], identifiers and literals by label, holes as ?N; any
// other shape falls back to the serialized AST form.
std::string render_template(const TreePtr& t);

}  // namespace editmine
