#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "editmine/cluster.hpp"
#include "editmine/extract.hpp"

namespace editmine {

// Unreadable repository or unusable source layout. Per-file trouble
// (unparseable content, missing counterpart) is skipped with a warning
// instead.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ChangedFile {
  std::string path;
  std::string before_text;
  std::string after_text;
};

// One consecutive revision pair: the files modified between some r_i and
// r_{i+1}, identified by the id of r_{i+1}.
struct RevisionDelta {
  std::string commit;
  std::vector<ChangedFile> files;
};

// A revision history to mine. Deltas come in history order; files within a
// delta carry both versions of every path modified in place (added and
// removed files have no counterpart and never appear).
class RevisionSource {
public:
  virtual ~RevisionSource() = default;
  virtual const std::string& project_id() const = 0;
  virtual std::vector<RevisionDelta> deltas() = 0;
};

// Hermetic layout for tests and corpora: every direct subdirectory holding
// both `before.ast` and `after.ast` is one revision pair. Cases are walked in
// name order; the case name doubles as the commit id.
class PairsDirectorySource : public RevisionSource {
public:
  explicit PairsDirectorySource(std::string dir, std::string project = "");
  const std::string& project_id() const override { return project_; }
  std::vector<RevisionDelta> deltas() override;

private:
  std::string dir_;
  std::string project_;
};

// Real git history, read with the git binary. Follows first parents only, so
// merge commits contribute one pair against the mainline; renames are not
// tracked (delete+add, skipped by the modified-only filter).
class GitRevisionSource : public RevisionSource {
public:
  explicit GitRevisionSource(std::string repo_dir, std::string project = "");
  const std::string& project_id() const override { return project_; }
  std::vector<RevisionDelta> deltas() override;

private:
  std::string dir_;
  std::string project_;
};

// Picks PairsDirectorySource or GitRevisionSource by looking for `.git`.
std::unique_ptr<RevisionSource> open_source(const std::string& dir,
                                            std::string project = "");

// File contents -> Tree. Must be deterministic.
class ParserAdapter {
public:
  virtual ~ParserAdapter() = default;
  // Filename suffixes this adapter claims; files with other names are not
  // offered to it. Empty means every file.
  virtual std::vector<std::string> extensions() const = 0;
  virtual TreePtr parse(const std::string& text) const = 0;
};

// Reads the serialized AST text format (.ast files).
class SexprParserAdapter : public ParserAdapter {
public:
  std::vector<std::string> extensions() const override { return {".ast"}; }
  TreePtr parse(const std::string& text) const override;
};

struct WalkRecord {
  std::string project;
  std::string commit;
  std::string path;
  TreePtr before;
  TreePtr after;
};

// One record per modified, parseable file per revision pair, in commit then
// path order. Files the adapter rejects (and files whose trees contain holes,
// which cannot be diffed) are skipped with a warning.
std::vector<WalkRecord> walk(RevisionSource& source, const ParserAdapter& parser);

struct MineOptions {
  int dcap_depth = 1;
  int workers = 1;  // concurrent diff/extract over records, and over buckets
  AnchorPolicy anchors;
  size_t max_component_edits = 20;
  size_t* candidate_checks = nullptr;
};

// The full pipeline: walk each source, diff every record, split the scripts
// into connected components, lift them to concrete edits, and cluster across
// all sources. Returns every cluster, singletons included; filtering and
// ranking happen in the catalog layer. Edit order is project, commit, path,
// position regardless of worker count.
std::vector<Cluster> mine(std::span<RevisionSource* const> sources,
                          const ParserAdapter& parser,
                          const MineOptions& opts = {});
std::vector<Cluster> mine(RevisionSource& source, const ParserAdapter& parser,
                          const MineOptions& opts = {});

}  // namespace editmine
