// Python surface. Everything crosses the boundary as text: trees in the
// s-expression form, catalogs in the structured line format. No wrapped
// C++ types, so the module stays trivially picklable and stable.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "editmine/antiunify.hpp"
#include "editmine/catalog.hpp"
#include "editmine/cluster.hpp"
#include "editmine/diff.hpp"
#include "editmine/ingest.hpp"
#include "editmine/pattern.hpp"
#include "editmine/sexpr.hpp"

namespace py = pybind11;
using namespace editmine;

namespace {

using EditTexts = std::vector<std::pair<std::string, std::string>>;

std::vector<ConcreteEdit> to_edits(const EditTexts& pairs) {
  std::vector<ConcreteEdit> edits;
  edits.reserve(pairs.size());
  for (const auto& [b, a] : pairs)
    edits.push_back({parse_ast_text(b), parse_ast_text(a), {}});
  return edits;
}

// The after side is expected in shared-hole form (as learn() returns it), so
// an identity hole map reconstructs the rule.
EditPattern pattern_from_texts(const std::string& before, const std::string& after) {
  EditPattern p;
  p.before_template = parse_ast_text(before);
  p.after_template = parse_ast_text(after);
  for (int h : holes_of(p.after_template)) p.hole_map[h] = h;
  return p;
}

}  // namespace

PYBIND11_MODULE(editmine, m) {
  m.doc() = "mining repeated tree edits from AST revision pairs";

  py::register_exception<ParseError>(m, "AstParseError", PyExc_ValueError);
  py::register_exception<IoError>(m, "SourceIoError", PyExc_OSError);

  m.def("version", [] { return std::string(EDITMINE_VERSION); });

  m.def(
      "canonical",
      [](const std::string& text) { return serialize_ast_text(parse_ast_text(text)); },
      py::arg("text"), "Parse s-expression AST text and serialize it back.");

  m.def(
      "diff_debug",
      [](const std::string& before, const std::string& after) {
        return to_debug_string(diff(parse_ast_text(before), parse_ast_text(after)));
      },
      py::arg("before"), py::arg("after"),
      "Edit script between two trees, one operation per line.");

  m.def(
      "check_roundtrip",
      [](const std::string& before, const std::string& after) {
        TreePtr s = parse_ast_text(before);
        TreePtr t = parse_ast_text(after);
        return structurally_equal(editmine::apply(diff(s, t), s), t);
      },
      py::arg("before"), py::arg("after"),
      "True when replaying diff(before, after) on before reproduces after.");

  m.def(
      "anti_unify",
      [](const std::vector<std::string>& texts) {
        std::vector<TreePtr> trees;
        trees.reserve(texts.size());
        for (const auto& t : texts) trees.push_back(parse_ast_text(t));
        return serialize_ast_text(canonical_holes(au_many(trees).tmpl));
      },
      py::arg("trees"),
      "Least general template of the given trees, holes numbered in preorder.");

  m.def(
      "dcap",
      [](const std::string& text, int d) {
        return serialize_ast_text(dcap(parse_ast_text(text), d));
      },
      py::arg("text"), py::arg("d") = 1,
      "Depth-capped skeleton used as the clustering bucket key.");

  m.def(
      "learn",
      [](const EditTexts& pairs) -> std::optional<std::pair<std::string, std::string>> {
        auto edits = to_edits(pairs);
        auto p = learn_pattern(edits);
        if (!p) return std::nullopt;
        return std::make_pair(serialize_ast_text(p->before_template),
                              serialize_ast_text(after_with_shared_holes(*p)));
      },
      py::arg("edits"),
      "Rewrite rule consistent with every (before, after) pair, or None. The "
      "after template reuses the before template's hole names.");

  m.def(
      "pattern_apply",
      [](const std::string& before_tmpl, const std::string& after_tmpl,
         const std::string& subject) -> std::optional<std::string> {
        auto p = pattern_from_texts(before_tmpl, after_tmpl);
        auto r = apply_pattern(p, parse_ast_text(subject));
        if (!r) return std::nullopt;
        return serialize_ast_text(*r);
      },
      py::arg("before"), py::arg("after"), py::arg("subject"),
      "Rewrite subject with a rule in the form learn() returns, or None.");

  m.def(
      "cluster",
      [](const EditTexts& pairs, int d, int workers) {
        auto edits = to_edits(pairs);
        ClusterOptions opts;
        opts.dcap_depth = d;
        opts.workers = workers;
        std::vector<Cluster> clusters;
        {
          py::gil_scoped_release release;
          clusters = cluster_all(edits, opts);
        }
        std::vector<std::tuple<size_t, std::string, std::string>> out;
        out.reserve(clusters.size());
        for (const auto& c : clusters)
          out.emplace_back(c.members.size(),
                           serialize_ast_text(c.pattern.before_template),
                           serialize_ast_text(after_with_shared_holes(c.pattern)));
        return out;
      },
      py::arg("edits"), py::arg("d") = 1, py::arg("workers") = 1,
      "Greedy clusters over the edits as (size, before, after) tuples.");

  m.def(
      "mine",
      [](const std::vector<std::string>& dirs, int d, int workers) {
        MineOptions opts;
        opts.dcap_depth = d;
        opts.workers = workers;
        std::vector<Cluster> clusters;
        {
          py::gil_scoped_release release;
          std::vector<std::unique_ptr<RevisionSource>> owned;
          owned.reserve(dirs.size());
          for (const auto& dir : dirs) owned.push_back(open_source(dir));
          std::vector<RevisionSource*> sources;
          sources.reserve(owned.size());
          for (auto& s : owned) sources.push_back(s.get());
          SexprParserAdapter parser;
          clusters = mine(sources, parser, opts);
        }
        CatalogMeta meta;
        meta.dcap_depth = d;
        meta.min_projects = 0;
        meta.min_edits = 0;
        meta.drop_spurious = false;
        meta.tool_version = EDITMINE_VERSION;
        return export_catalog(aggregate(clusters, meta));
      },
      py::arg("dirs"), py::arg("d") = 1, py::arg("workers") = 1,
      "Mine revision sources (pairs directories or git repos) into an "
      "unfiltered catalog in the structured line format.");

  m.def(
      "filter_catalog",
      [](const std::string& text, size_t min_projects, size_t min_edits,
         bool drop_spurious) {
        return export_catalog(editmine::filter_catalog(
            import_catalog(text), min_projects, min_edits, drop_spurious));
      },
      py::arg("catalog"), py::arg("min_projects") = 3, py::arg("min_edits") = 2,
      py::arg("drop_spurious") = true,
      "Re-threshold a structured catalog; returns the filtered catalog.");

  m.def(
      "render_catalog",
      [](const std::string& text) {
        return export_catalog(import_catalog(text), CatalogFormat::rule_text);
      },
      py::arg("catalog"), "Human-readable before/after blocks of a catalog.");
}
