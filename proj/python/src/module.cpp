#include "rolegraph/cli.hpp"
#include "rolegraph/context_window.hpp"
#include "rolegraph/corpus_io.hpp"
#include "rolegraph/diffusion.hpp"
#include "rolegraph/error.hpp"
#include "rolegraph/evaluate.hpp"
#include "rolegraph/gcn.hpp"
#include "rolegraph/graph_build.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace rolegraph;

namespace {

using LabelList = std::vector<std::optional<std::string>>;

EmbeddingMatrix to_embeddings(const py::array_t<float, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw DimensionError("embeddings must be a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto dims = static_cast<std::size_t>(a.shape(1));
  return EmbeddingMatrix(rows, dims, std::vector<float>(a.data(), a.data() + rows * dims));
}

py::array_t<float> to_array(const EmbeddingMatrix& m) {
  py::array_t<float> out({m.rows(), m.dims()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

LabelArray to_label_array(const LabelList& labels, const std::vector<bool>& mask) {
  std::vector<std::optional<RoleLabel>> a;
  a.reserve(labels.size());
  for (const auto& l : labels) a.push_back(l ? std::optional(parse_role(*l)) : std::nullopt);
  return LabelArray(std::move(a), mask);
}

py::dict to_dict(const Prediction& p) {
  py::dict d;
  d["index"] = p.index;
  d["label"] = std::string(role_name(p.label));
  d["scores"] = p.scores;
  d["undecided"] = p.undecided;
  return d;
}

py::list to_list(const std::vector<Prediction>& preds) {
  py::list out;
  for (const auto& p : preds) out.append(to_dict(p));
  return out;
}

std::vector<Prediction> from_list(const py::list& preds) {
  std::vector<Prediction> out;
  for (const auto& item : preds) {
    const auto d = item.cast<py::dict>();
    Prediction p{d["index"].cast<std::size_t>(), parse_role(d["label"].cast<std::string>()), {}, false};
    if (d.contains("scores")) p.scores = d["scores"].cast<std::vector<double>>();
    if (d.contains("undecided")) p.undecided = d["undecided"].cast<bool>();
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<SentenceRecord> to_records(const py::list& records) {
  std::vector<SentenceRecord> out;
  for (const auto& item : records) {
    const auto d = item.cast<py::dict>();
    SentenceRecord r{d["doc_id"].cast<std::string>(), d["sent_index"].cast<std::size_t>(),
                     d["text"].cast<std::string>(), std::nullopt};
    if (d.contains("label") && !d["label"].is_none()) r.label = parse_role(d["label"].cast<std::string>());
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::size_t> masked_indices(const std::vector<bool>& mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(i);
  return out;
}

}  // namespace

PYBIND11_MODULE(_rolegraph, m) {
  m.doc() = "Similarity graphs, label diffusion and a two-layer GCN for rhetorical-role labelling";

  auto base = py::register_exception<Error>(m, "RolegraphError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<TaxonomyError>(m, "TaxonomyError", base.ptr());
  py::register_exception<CorpusError>(m, "CorpusError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::list roles;
  for (auto r : all_roles()) roles.append(std::string(role_name(r)));
  m.attr("ROLES") = roles;

  py::class_<SentenceGraph>(m, "SentenceGraph")
      .def(py::init([](std::size_t n, double threshold, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
             std::vector<Edge> e;
             for (const auto& [i, j, w] : edges) e.push_back({i, j, w});
             return SentenceGraph(n, threshold, std::move(e));
           }),
           py::arg("n"), py::arg("threshold"), py::arg("edges"))
      .def_property_readonly("n", &SentenceGraph::size)
      .def_property_readonly("threshold", &SentenceGraph::threshold)
      .def_property_readonly("edges",
                             [](const SentenceGraph& g) {
                               std::vector<std::tuple<std::size_t, std::size_t, double>> out;
                               for (const auto& e : g.edges()) out.emplace_back(e.i, e.j, e.weight);
                               return out;
                             })
      .def_property_readonly("degree", &SentenceGraph::degree)
      .def("to_sgraph", &encode_graph)
      .def("__eq__", [](const SentenceGraph& a, const SentenceGraph& b) { return a == b; })
      .def("__repr__", [](const SentenceGraph& g) {
        return "<SentenceGraph n=" + std::to_string(g.size()) + " edges=" + std::to_string(g.edges().size()) + ">";
      });

  m.def("cosine", [](const py::array_t<float, py::array::forcecast>& x, const py::array_t<float, py::array::forcecast>& y) {
    return cosine({x.data(), static_cast<std::size_t>(x.size())}, {y.data(), static_cast<std::size_t>(y.size())});
  });
  m.def("build_graph", [](const py::array_t<float, py::array::c_style | py::array::forcecast>& emb, double threshold,
                          unsigned workers) { return build_graph(to_embeddings(emb), threshold, workers); },
        py::arg("embeddings"), py::arg("threshold") = kDefaultThreshold, py::arg("workers") = 1u);
  m.def("parse_graph", &decode_graph, py::arg("text"));
  m.def("read_graph", &read_graph, py::arg("path"));
  m.def("write_graph", &write_graph, py::arg("graph"), py::arg("path"));

  m.def("read_embeddings", [](const std::filesystem::path& p) { return to_array(read_embeddings(p)); }, py::arg("path"));
  m.def("write_embeddings",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& a, const std::filesystem::path& p) {
          write_embeddings(to_embeddings(a), p);
        },
        py::arg("embeddings"), py::arg("path"));

  m.def("read_labels",
        [](const std::filesystem::path& p) {
          const auto l = read_labels(p);
          LabelList labels;
          std::vector<bool> mask;
          for (std::size_t i = 0; i < l.size(); ++i) {
            const auto& a = l.assignment(i);
            labels.push_back(a ? std::optional(std::string(role_name(*a))) : std::nullopt);
            mask.push_back(l.masked(i));
          }
          return py::make_tuple(labels, mask);
        },
        py::arg("path"));
  m.def("write_labels",
        [](const LabelList& labels, const std::vector<bool>& mask, const std::filesystem::path& p) {
          write_labels(to_label_array(labels, mask), p);
        },
        py::arg("labels"), py::arg("mask"), py::arg("path"));

  m.def("diffuse",
        [](const SentenceGraph& g, const LabelList& labels, const std::vector<bool>& mask, double alpha,
           const std::string& method, double tol, int max_iters) {
          DiffusionConfig cfg{alpha, max_iters, tol};
          cfg.validate();
          if (method != "closed_form" && method != "iterative")
            throw ConfigError("method must be 'closed_form' or 'iterative'");
          if (g.size() != labels.size()) throw DimensionError("labels and graph differ in size");
          const auto la = to_label_array(labels, mask);
          const auto p = normalize(g, NormMode::Diffusion);
          const auto r = method == "iterative" ? diffuse_iterative(p, la.onehot(), cfg)
                                               : diffuse_closed_form(p, la.onehot(), cfg);
          py::dict out;
          out["scores"] = r.scores;
          out["iterations"] = r.iterations_run;
          out["converged"] = r.converged;
          out["isolated"] = p.isolated;
          out["predictions"] = to_list(predict(r, la.masked_indices()));
          return out;
        },
        py::arg("graph"), py::arg("labels"), py::arg("mask"), py::arg("alpha") = 0.5,
        py::arg("method") = "closed_form", py::arg("tol") = 1e-8, py::arg("max_iters") = 1000);

  py::class_<GcnModel>(m, "GcnModel")
      .def(py::init([](Eigen::MatrixXd w0, Eigen::MatrixXd w1) { return GcnModel{std::move(w0), std::move(w1)}; }),
           py::arg("w0"), py::arg("w1"))
      .def_static("init", &GcnModel::init, py::arg("input_dim"), py::arg("hidden_dim"), py::arg("num_classes"),
                  py::arg("seed") = 42)
      .def_readwrite("w0", &GcnModel::w0)
      .def_readwrite("w1", &GcnModel::w1)
      .def("save", [](const GcnModel& mdl, const std::filesystem::path& p) { write_checkpoint(mdl, p); })
      .def_static("load", &read_checkpoint);

  m.def("gcn_forward",
        [](const GcnModel& mdl, const SentenceGraph& g, const Eigen::MatrixXd& x) {
          return forward(mdl, normalize(g, NormMode::Gcn), x);
        },
        py::arg("model"), py::arg("graph"), py::arg("features"));
  m.def("gcn_train",
        [](const SentenceGraph& g, const py::array_t<float, py::array::c_style | py::array::forcecast>& emb,
           const LabelList& labels, const std::vector<bool>& mask, std::size_t hidden, double lr, int epochs,
           std::uint64_t seed) {
          TrainConfig cfg;
          cfg.learning_rate = lr;
          cfg.epochs = epochs;
          const auto e = to_embeddings(emb);
          const auto la = to_label_array(labels, mask);
          auto result = train(GcnModel::init(e.dims(), hidden, kNumRoles, seed), normalize(g, NormMode::Gcn),
                              e.to_dense(), la.onehot(), mask, cfg);
          return py::make_tuple(std::move(result.model), result.loss_history);
        },
        py::arg("graph"), py::arg("embeddings"), py::arg("labels"), py::arg("mask"), py::arg("hidden") = kDefaultHidden,
        py::arg("lr") = 1e-2, py::arg("epochs") = 200, py::arg("seed") = 42);
  m.def("gcn_predict",
        [](const GcnModel& mdl, const SentenceGraph& g,
           const py::array_t<float, py::array::c_style | py::array::forcecast>& emb, const std::vector<bool>& mask) {
          return to_list(predict(mdl, normalize(g, NormMode::Gcn), to_embeddings(emb).to_dense(), masked_indices(mask)));
        },
        py::arg("model"), py::arg("graph"), py::arg("embeddings"), py::arg("mask"));

  m.def("strip_stopwords", [](const std::string& text) { return strip_stopwords(text, StopwordList::english()); },
        py::arg("text"));
  m.def("windowize",
        [](const py::list& records, bool clean, const std::string& pad, const std::string& separator) {
          WindowOptions opts{pad, separator, clean};
          py::list out;
          for (const auto& w : windowize_corpus(to_records(records), StopwordList::english(), opts)) {
            py::dict d;
            d["doc_id"] = w.doc_id;
            d["sent_index"] = w.sent_index;
            d["input"] = w.input;
            out.append(d);
          }
          return out;
        },
        py::arg("records"), py::arg("clean") = true, py::arg("pad") = std::string(kDefaultPad),
        py::arg("separator") = std::string(kDefaultSeparator));

  m.def("evaluate",
        [](const py::list& predictions, const LabelList& gold, const std::vector<bool>& mask, const std::string& name) {
          const auto g = to_label_array(gold, mask);
          const auto preds = from_list(predictions);
          const auto report = evaluate(preds, g, g.masked_indices(), name);
          return py::module_::import("json").attr("loads")(render_json(report));
        },
        py::arg("predictions"), py::arg("gold"), py::arg("mask"), py::arg("name") = "model");

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          const int code = run_cli(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
