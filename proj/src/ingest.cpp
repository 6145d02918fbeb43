#include "editmine/ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "editmine/log.hpp"
#include "editmine/sexpr.hpp"
#include "parallel.hpp"

namespace fs = std::filesystem;

namespace editmine {

namespace {

std::string dir_basename(const std::string& dir) {
  fs::path p(dir);
  if (!p.has_filename()) p = p.parent_path();  // trailing slash
  std::string name = p.filename().string();
  return name.empty() ? dir : name;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream out;
  out << in.rdbuf();
  return std::move(out).str();
}

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'')
      q += "'\\''";
    else
      q += c;
  }
  q += "'";
  return q;
}

// Run a command, capture stdout. Non-zero exit is an IoError: everything we
// ask git for must exist if the repository is sound.
std::string run_capture(const std::string& cmd) {
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) throw IoError("cannot run: " + cmd);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  if (status != 0) throw IoError("command failed: " + cmd);
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty()) lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(std::move(cur));
  return lines;
}

}  // namespace

PairsDirectorySource::PairsDirectorySource(std::string dir, std::string project)
    : dir_(std::move(dir)),
      project_(project.empty() ? dir_basename(dir_) : std::move(project)) {}

std::vector<RevisionDelta> PairsDirectorySource::deltas() {
  std::error_code ec;
  if (!fs::is_directory(dir_, ec)) throw IoError("not a directory: " + dir_);
  std::vector<std::string> cases;
  for (const auto& entry : fs::directory_iterator(dir_, ec)) {
    if (!entry.is_directory()) continue;
    if (fs::exists(entry.path() / "before.ast") && fs::exists(entry.path() / "after.ast"))
      cases.push_back(entry.path().filename().string());
  }
  if (ec) throw IoError("cannot list " + dir_ + ": " + ec.message());
  std::sort(cases.begin(), cases.end());

  std::vector<RevisionDelta> out;
  out.reserve(cases.size());
  for (const auto& name : cases) {
    fs::path case_dir = fs::path(dir_) / name;
    RevisionDelta d;
    d.commit = name;
    d.files.push_back({name + "/after.ast", read_file(case_dir / "before.ast"),
                       read_file(case_dir / "after.ast")});
    out.push_back(std::move(d));
  }
  return out;
}

GitRevisionSource::GitRevisionSource(std::string repo_dir, std::string project)
    : dir_(std::move(repo_dir)),
      project_(project.empty() ? dir_basename(dir_) : std::move(project)) {}

std::vector<RevisionDelta> GitRevisionSource::deltas() {
  std::error_code ec;
  if (!fs::is_directory(dir_, ec)) throw IoError("not a directory: " + dir_);
  std::string git = "git -C " + shell_quote(dir_) + " ";
  auto commits = split_lines(run_capture(git + "log --first-parent --reverse --format=%H"));

  std::vector<RevisionDelta> out;
  for (size_t i = 1; i < commits.size(); ++i) {
    const std::string& parent = commits[i - 1];
    const std::string& commit = commits[i];
    auto paths = split_lines(run_capture(git +
                                         "diff-tree -r --no-renames --diff-filter=M "
                                         "--name-only " +
                                         parent + " " + commit));
    RevisionDelta d;
    d.commit = commit;
    for (const auto& path : paths) {
      d.files.push_back(
          {path, run_capture(git + "show " + shell_quote(parent + ":" + path)),
           run_capture(git + "show " + shell_quote(commit + ":" + path))});
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::unique_ptr<RevisionSource> open_source(const std::string& dir, std::string project) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir);
  if (fs::exists(fs::path(dir) / ".git"))
    return std::make_unique<GitRevisionSource>(dir, std::move(project));
  return std::make_unique<PairsDirectorySource>(dir, std::move(project));
}

TreePtr SexprParserAdapter::parse(const std::string& text) const {
  return parse_ast_text(text);
}

namespace {

bool claimed(const std::string& path, const std::vector<std::string>& exts) {
  if (exts.empty()) return true;
  for (const auto& e : exts)
    if (path.size() >= e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0)
      return true;
  return false;
}

}  // namespace

std::vector<WalkRecord> walk(RevisionSource& source, const ParserAdapter& parser) {
  std::vector<WalkRecord> records;
  auto exts = parser.extensions();
  for (auto& delta : source.deltas()) {
    std::sort(delta.files.begin(), delta.files.end(),
              [](const ChangedFile& a, const ChangedFile& b) { return a.path < b.path; });
    for (const auto& file : delta.files) {
      if (!claimed(file.path, exts)) continue;
      TreePtr before, after;
      try {
        before = parser.parse(file.before_text);
        after = parser.parse(file.after_text);
      } catch (const ParseError& e) {
        log_warn("skipping " + file.path + " at " + delta.commit + ": " + e.what());
        continue;
      }
      if (contains_holes(before) || contains_holes(after)) {
        log_warn("skipping " + file.path + " at " + delta.commit + ": contains holes");
        continue;
      }
      records.push_back(
          {source.project_id(), delta.commit, file.path, std::move(before), std::move(after)});
    }
  }
  return records;
}

std::vector<Cluster> mine(std::span<RevisionSource* const> sources,
                          const ParserAdapter& parser, const MineOptions& opts) {
  std::vector<WalkRecord> records;
  for (RevisionSource* src : sources) {
    auto part = walk(*src, parser);
    records.insert(records.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
  }

  std::vector<std::vector<ConcreteEdit>> per_record(records.size());
  ExtractOptions eo{opts.max_component_edits};
  detail::run_indexed(records.size(), opts.workers, [&](size_t i) {
    const WalkRecord& r = records[i];
    EditScript script = diff(r.before, r.after);
    per_record[i] = extract_edits(script, r.before, r.after, eo);
    for (ConcreteEdit& e : per_record[i]) {
      e.origin.project = r.project;
      e.origin.commit = r.commit;
      e.origin.path = r.path;
    }
  });

  std::vector<ConcreteEdit> edits;
  for (auto& v : per_record)
    for (auto& e : v) edits.push_back(std::move(e));
  log_info("mined " + std::to_string(edits.size()) + " edits from " +
           std::to_string(records.size()) + " file revisions");

  ClusterOptions co;
  co.dcap_depth = opts.dcap_depth;
  co.anchors = opts.anchors;
  co.workers = opts.workers;
  co.candidate_checks = opts.candidate_checks;
  return cluster_all(edits, co);
}

std::vector<Cluster> mine(RevisionSource& source, const ParserAdapter& parser,
                          const MineOptions& opts) {
  RevisionSource* one[] = {&source};
  return mine(std::span<RevisionSource* const>(one), parser, opts);
}

}  // namespace editmine
