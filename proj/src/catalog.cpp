#include "editmine/catalog.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "editmine/sexpr.hpp"

namespace editmine {

namespace {

using nlohmann::json;

const std::set<std::string>& identifier_kinds() {
  static const std::set<std::string> kinds = {"id", "name"};
  return kinds;
}

uint64_t fnv1a(uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  h ^= 0xff;  // field separator
  h *= 1099511628211ull;
  return h;
}

}  // namespace

uint64_t pattern_hash(const EditPattern& p) {
  uint64_t h = 14695981039346656037ull;
  h = fnv1a(h, serialize_ast_text(p.before_template));
  h = fnv1a(h, serialize_ast_text(p.after_template));
  for (auto [after, before] : p.hole_map)
    h = fnv1a(h, std::to_string(after) + ":" + std::to_string(before));
  return h;
}

PatternCatalog aggregate(std::span<const Cluster> clusters, CatalogMeta meta) {
  PatternCatalog cat;
  cat.meta = std::move(meta);
  cat.entries.reserve(clusters.size());
  for (const Cluster& c : clusters) {
    CatalogEntry e;
    e.pattern = c.pattern;
    e.edit_count = c.members.size();
    std::set<std::string> projects;
    for (const Provenance& prov : c.pattern.support) projects.insert(prov.project);
    e.projects.assign(projects.begin(), projects.end());
    e.project_count = e.projects.size();
    e.pattern_hash = pattern_hash(e.pattern);
    cat.entries.push_back(std::move(e));
  }
  std::stable_sort(cat.entries.begin(), cat.entries.end(),
                   [](const CatalogEntry& a, const CatalogEntry& b) {
                     if (a.project_count != b.project_count)
                       return a.project_count > b.project_count;
                     if (a.edit_count != b.edit_count) return a.edit_count > b.edit_count;
                     return a.pattern_hash < b.pattern_hash;
                   });
  return cat;
}

bool is_vacuous(const EditPattern& p) {
  return p.before_template->is_hole() && p.after_template->is_hole();
}

namespace {

// Lockstep walk tolerating exactly one label difference, and only on a
// labeled identifier leaf.
bool rename_walk(const TreePtr& a, const TreePtr& b, int& diffs) {
  if (a->is_hole() || b->is_hole())
    return a->is_hole() && b->is_hole() && a->hole_id() == b->hole_id();
  if (a->kind() != b->kind()) return false;
  if (a->children().size() != b->children().size()) return false;
  if (a->is_leaf()) {
    if (a->label() == b->label()) return true;
    if (!a->label() || !b->label()) return false;
    if (!identifier_kinds().count(a->kind())) return false;
    return ++diffs <= 1;
  }
  for (size_t i = 0; i < a->children().size(); ++i)
    if (!rename_walk(a->children()[i], b->children()[i], diffs)) return false;
  return true;
}

}  // namespace

bool is_pure_rename(const EditPattern& p) {
  int diffs = 0;
  return rename_walk(p.before_template, after_with_shared_holes(p), diffs) && diffs == 1;
}

PatternCatalog filter_catalog(const PatternCatalog& cat, size_t min_projects,
                              size_t min_edits, bool drop_spurious) {
  PatternCatalog out;
  out.meta = cat.meta;
  out.meta.min_projects = min_projects;
  out.meta.min_edits = min_edits;
  out.meta.drop_spurious = drop_spurious;
  for (const CatalogEntry& e : cat.entries) {
    if (e.project_count < min_projects || e.edit_count < min_edits) continue;
    if (drop_spurious && (is_vacuous(e.pattern) || is_pure_rename(e.pattern))) continue;
    out.entries.push_back(e);
  }
  return out;
}

PatternCatalog filter_catalog(const PatternCatalog& cat) {
  return filter_catalog(cat, cat.meta.min_projects, cat.meta.min_edits,
                        cat.meta.drop_spurious);
}

CoverageReport report_coverage(std::span<const Cluster> clusters) {
  CoverageReport r;
  for (const Cluster& c : clusters) {
    r.total_edits += c.members.size();
    if (c.members.size() >= 2) r.covered_edits += c.members.size();
  }
  return r;
}

namespace {

json span_to_json(const std::optional<SourceSpan>& s) {
  if (!s) return nullptr;
  return json::array({s->begin_line, s->begin_col, s->end_line, s->end_col});
}

std::optional<SourceSpan> span_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return SourceSpan{j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>(),
                    j.at(3).get<int>()};
}

json entry_to_json(const CatalogEntry& e) {
  json support = json::array();
  for (const Provenance& p : e.pattern.support) {
    support.push_back({{"project", p.project},
                       {"commit", p.commit},
                       {"path", p.path},
                       {"span", span_to_json(p.span)}});
  }
  json hole_map = json::array();
  for (auto [after, before] : e.pattern.hole_map)
    hole_map.push_back(json::array({after, before}));
  return {{"before", serialize_ast_text(e.pattern.before_template)},
          {"after", serialize_ast_text(e.pattern.after_template)},
          {"hole_map", hole_map},
          {"edit_count", e.edit_count},
          {"project_count", e.project_count},
          {"projects", e.projects},
          {"support", support}};
}

std::string render_rule_text(const PatternCatalog& cat) {
  std::ostringstream out;
  out << "catalog: " << cat.entries.size() << " patterns (d=" << cat.meta.dcap_depth
      << ", min projects " << cat.meta.min_projects << ", min edits "
      << cat.meta.min_edits << ")\n";
  size_t rank = 0;
  for (const CatalogEntry& e : cat.entries) {
    out << "\npattern " << ++rank << " (projects: " << e.project_count
        << ", edits: " << e.edit_count << ")\n";
    out << "  before: " << render_template(e.pattern.before_template) << "\n";
    out << "  after:  " << render_template(after_with_shared_holes(e.pattern)) << "\n";
  }
  return std::move(out).str();
}

}  // namespace

std::string export_catalog(const PatternCatalog& cat, CatalogFormat format) {
  if (format == CatalogFormat::rule_text) return render_rule_text(cat);
  std::ostringstream out;
  json meta = {{"catalog", "editmine"},
               {"tool_version", cat.meta.tool_version},
               {"dcap_depth", cat.meta.dcap_depth},
               {"min_projects", cat.meta.min_projects},
               {"min_edits", cat.meta.min_edits},
               {"drop_spurious", cat.meta.drop_spurious}};
  out << meta.dump() << "\n";
  for (const CatalogEntry& e : cat.entries) out << entry_to_json(e).dump() << "\n";
  return std::move(out).str();
}

namespace {

std::vector<std::string> nonempty_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(std::move(cur));
  return lines;
}

}  // namespace

PatternCatalog import_catalog(const std::string& text) {
  auto lines = nonempty_lines(text);
  if (lines.empty()) throw ParseError("empty catalog", 1, 1);

  PatternCatalog cat;
  json meta;
  try {
    meta = json::parse(lines[0]);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad catalog header: ") + e.what(), 1, 1);
  }
  if (!meta.is_object() || meta.value("catalog", "") != "editmine")
    throw ParseError("not an editmine catalog", 1, 1);
  try {
    cat.meta.tool_version = meta.value("tool_version", "");
    cat.meta.dcap_depth = meta.value("dcap_depth", 1);
    cat.meta.min_projects = meta.value("min_projects", size_t{3});
    cat.meta.min_edits = meta.value("min_edits", size_t{2});
    cat.meta.drop_spurious = meta.value("drop_spurious", true);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad catalog header: ") + e.what(), 1, 1);
  }

  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    int lineno = static_cast<int>(i + 1);
    CatalogEntry e;
    try {
      json j = json::parse(lines[i]);
      e.pattern.before_template = parse_ast_text(j.at("before").get<std::string>());
      e.pattern.after_template = parse_ast_text(j.at("after").get<std::string>());
      for (const json& m : j.at("hole_map"))
        e.pattern.hole_map[m.at(0).get<int>()] = m.at(1).get<int>();
      e.edit_count = j.at("edit_count").get<size_t>();
      e.project_count = j.at("project_count").get<size_t>();
      e.projects = j.at("projects").get<std::vector<std::string>>();
      for (const json& s : j.at("support")) {
        Provenance p;
        p.project = s.at("project").get<std::string>();
        p.commit = s.at("commit").get<std::string>();
        p.path = s.at("path").get<std::string>();
        p.span = span_from_json(s.at("span"));
        e.pattern.support.push_back(std::move(p));
      }
    } catch (const json::exception& ex) {
      throw ParseError(std::string("bad catalog entry: ") + ex.what(), lineno, 1);
    } catch (const ParseError& ex) {
      throw ParseError(std::string("bad template: ") + ex.what(), lineno, 1);
    }
    e.pattern_hash = pattern_hash(e.pattern);
    cat.entries.push_back(std::move(e));
  }
  return cat;
}

namespace {

void render_rec(const TreePtr& t, std::string& out) {
  if (t->is_hole()) {
    out += "?" + std::to_string(t->hole_id());
    return;
  }
  if (t->is_leaf()) {
    if (!t->label()) {
      out += t->kind();
    } else if (t->kind() == "lit:string") {
      out += "\"" + *t->label() + "\"";
    } else {
      out += *t->label();
    }
    return;
  }
  const auto& kids = t->children();
  if (t->kind() == "call" && kids.size() >= 2 && kids[1]->is_leaf() &&
      kids[1]->kind() == "name" && kids[1]->label()) {
    render_rec(kids[0], out);
    out += "." + *kids[1]->label() + "(";
    for (size_t i = 2; i < kids.size(); ++i) {
      if (i > 2) out += ", ";
      render_rec(kids[i], out);
    }
    out += ")";
    return;
  }
  if (t->kind() == "index" && kids.size() == 2) {
    render_rec(kids[0], out);
    out += "[";
    render_rec(kids[1], out);
    out += "]";
    return;
  }
  out += serialize_ast_text(t);
}

}  // namespace

std::string render_template(const TreePtr& t) {
  std::string out;
  render_rec(t, out);
  return out;
}

}  // namespace editmine
