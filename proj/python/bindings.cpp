#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <sstream>

#include "phishlab/attacks.hpp"
#include "phishlab/classifier.hpp"
#include "phishlab/cli.hpp"
#include "phishlab/collision.hpp"
#include "phishlab/dom.hpp"
#include "phishlab/error.hpp"
#include "phishlab/features.hpp"
#include "phishlab/mutation.hpp"
#include "phishlab/pelican.hpp"

namespace py = pybind11;
using namespace phishlab;

namespace {

// Runs an attack and hands back (report json, final page).
std::pair<std::string, DomTree> run_attack(const std::string& level, const Classifier& model, const DomTree& page,
                                           std::optional<Classifier> knowledge,
                                           std::optional<AdditionPool> pool, std::uint64_t seed,
                                           std::size_t budget, std::size_t batch) {
  ScoreOracle oracle(model);
  AttackResult r;
  switch (parse_level(level)) {
    case AttackLevel::white:
      r = white_box(knowledge ? *knowledge : model, oracle, page);
      break;
    case AttackLevel::grey:
      r = grey_box(rules_without_weights(knowledge ? *knowledge : model), oracle, page);
      break;
    case AttackLevel::black: {
      if (!pool) throw std::invalid_argument("black-box attack needs a pool");
      BlackBoxOptions opts;
      opts.seed = seed;
      opts.budget = budget;
      opts.batch = batch;
      r = black_box(oracle, page, *pool, opts);
      break;
    }
  }
  annotate(r, model);
  return {result_to_json(r, page.source_url, "", false), r.final_page};
}

}  // namespace

PYBIND11_MODULE(_phishlab, m) {
  m.doc() = "Phishing classifier evasion workbench";

  auto base = py::register_exception<Error>(m, "PhishlabError");
  py::register_exception<NotPhishing>(m, "NotPhishing", base.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
  py::register_exception<IoError>(m, "PhishlabIOError", base.ptr());

  py::class_<DomTree>(m, "Page")
      .def(py::init([](const std::string& html, const std::string& url) { return parse_html(html, url); }),
           py::arg("html"), py::arg("url") = "http://example.com/")
      .def_readonly("url", &DomTree::source_url)
      .def("html", [](const DomTree& t) { return serialize(t); })
      .def("features", [](const DomTree& t) { return extract_features(t); })
      .def("layer_sizes",
           [](const DomTree& t) {
             std::vector<std::size_t> out;
             for (const auto& l : bfs_layers(t)) out.push_back(l.size());
             return out;
           })
      .def("__len__", [](const DomTree& t) { return element_count(t); });

  py::class_<Classifier>(m, "Classifier")
      .def_static("from_json", &model_from_json, py::arg("text"))
      .def_static("load", &load_model, py::arg("path"))
      .def("to_json", &model_to_json, py::arg("strip_weights") = false)
      .def("save", &save_model, py::arg("path"), py::arg("strip_weights") = false)
      .def_readwrite("bias", &Classifier::bias)
      .def_readwrite("threshold", &Classifier::threshold)
      .def_readonly("hashed", &Classifier::hashed)
      .def_property_readonly("rule_ids",
                             [](const Classifier& c) {
                               std::vector<std::string> ids;
                               for (const auto& r : c.rules) ids.push_back(r.id);
                               return ids;
                             })
      .def("score", [](const Classifier& c, const DomTree& p) { return score_page_features(c, extract_features(p)); })
      .def("is_phishing", [](const Classifier& c, const DomTree& p) {
        return is_phishing(c, score_page_features(c, extract_features(p)));
      })
      .def("hashed_copy", &hash_model)
      .def("prune", &prune, py::arg("ids"))
      .def("subset_prune_targets", &subset_prune_targets)
      .def("single_prune_targets", &single_prune_targets);

  py::class_<AdditionPool>(m, "Pool")
      .def_static("from_jsonl", &pool_from_jsonl, py::arg("text"))
      .def_static("load", &load_pool, py::arg("path"))
      .def_static("harvest", &harvest_pool, py::arg("pages"))
      .def("to_jsonl", &pool_to_jsonl)
      .def("__len__", [](const AdditionPool& p) { return p.specs.size(); });

  m.def("hash_feature", &hash_feature, py::arg("canonical"));
  m.def("invert", [](const std::vector<std::string>& candidates, const std::vector<std::string>& digests) {
    return invert_hashes(candidates, digests).recovered;
  }, py::arg("candidates"), py::arg("digests"));

  m.def("_attack", &run_attack, py::arg("level"), py::arg("model"), py::arg("page"), py::arg("knowledge") = py::none(),
        py::arg("pool") = py::none(), py::arg("seed") = 0, py::arg("budget") = 2000, py::arg("batch") = 3);

  m.def("preserved", [](const DomTree& a, const DomTree& b) { return preservation_check(a, b).passed(); },
        py::arg("before"), py::arg("after"));
  m.def("similarity_baseline", py::overload_cast<const DomTree&, const DomTree&>(&tree_similarity_baseline),
        py::arg("a"), py::arg("b"));
  m.def("similarity_pelican",
        [](const DomTree& phish, const DomTree& unknown) { return tree_similarity_pelican(phish, unknown); },
        py::arg("phish"), py::arg("unknown"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
