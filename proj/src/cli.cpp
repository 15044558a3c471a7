#include "rolegraph/cli.hpp"

#include "rolegraph/context_window.hpp"
#include "rolegraph/corpus_io.hpp"
#include "rolegraph/diffusion.hpp"
#include "rolegraph/error.hpp"
#include "rolegraph/evaluate.hpp"
#include "rolegraph/gcn.hpp"
#include "rolegraph/graph_build.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <vector>

namespace rolegraph {

namespace fs = std::filesystem;

namespace {

void emit(const std::string& path, std::string_view content, std::ostream& out) {
  if (path.empty() || path == "-")
    out << content;
  else
    write_file(path, content);
}

std::string join_indices(const std::vector<std::size_t>& idx, std::size_t limit = 20) {
  std::string s;
  for (std::size_t i = 0; i < idx.size() && i < limit; ++i) s += (i ? ", " : "") + std::to_string(idx[i]);
  if (idx.size() > limit) s += ", ...";
  return s;
}

struct BuildGraphArgs {
  std::string embeddings;
  std::string output;
  double threshold = kDefaultThreshold;
  unsigned workers = 1;
};

struct SplitArgs {
  std::string corpus;
  std::string partition;
  std::string output;
};

struct DiffuseArgs {
  std::string graph;
  std::string labels;
  std::string output;
  DiffusionConfig cfg;
  bool closed_form = false;
  bool iterative = false;
};

struct GcnTrainArgs {
  std::string graph;
  std::string embeddings;
  std::string labels;
  std::string output;
  std::string loss_csv;
  std::size_t hidden = kDefaultHidden;
  std::uint64_t seed = 42;
  TrainConfig cfg;
};

struct GcnPredictArgs {
  std::string checkpoint;
  std::string graph;
  std::string embeddings;
  std::string labels;
  std::string output;
};

struct WindowArgs {
  std::string corpus;
  std::string output;
  std::string stopwords;
  WindowOptions options;
  bool no_clean = false;
};

struct EvaluateArgs {
  std::string labels;
  std::vector<std::string> predictions;
  std::string output;
  std::string json_output;
};

void check_node_count(std::size_t graph_n, std::size_t other_n, const char* what) {
  if (graph_n != other_n)
    throw DimensionError(std::string(what) + " has " + std::to_string(other_n) + " rows but the graph has " +
                         std::to_string(graph_n) + " nodes");
}

void cmd_build_graph(const BuildGraphArgs& a, std::ostream& out) {
  if (!(a.threshold >= 0.0 && a.threshold < 1.0)) throw ConfigError("--threshold must lie in [0, 1)");
  const auto m = read_embeddings(a.embeddings);
  emit(a.output, encode_graph(build_graph(m, a.threshold, a.workers)), out);
}

void cmd_split(const SplitArgs& a, std::ostream& out) {
  const auto records = read_corpus(a.corpus);
  const auto split = split_mask(records, read_partition(a.partition));
  emit(a.output, encode_labels(split.labels), out);
}

void cmd_diffuse(const DiffuseArgs& a, std::ostream& out, std::ostream& err) {
  a.cfg.validate();
  const auto graph = read_graph(a.graph);
  const auto labels = read_labels(a.labels);
  check_node_count(graph.size(), labels.size(), "label file");
  const auto p = normalize(graph, NormMode::Diffusion);
  const Eigen::MatrixXd y = labels.onehot();
  const auto result = a.iterative ? diffuse_iterative(p, y, a.cfg) : diffuse_closed_form(p, y, a.cfg);
  if (!result.converged)
    err << "diffuse: warning: iterative solver stopped after " << result.iterations_run
        << " iterations without reaching tol\n";
  const auto masked = labels.masked_indices();
  const auto preds = predict(result, masked);
  std::vector<std::size_t> undecided;
  for (const auto& pr : preds)
    if (pr.undecided) undecided.push_back(pr.index);
  if (!p.isolated.empty())
    err << "diffuse: " << p.isolated.size() << " isolated node(s): " << join_indices(p.isolated) << "\n";
  if (!undecided.empty())
    err << "diffuse: " << undecided.size() << " masked node(s) undecided, labelled NONE: " << join_indices(undecided)
        << "\n";
  emit(a.output, encode_predictions(preds), out);
}

void cmd_gcn_train(const GcnTrainArgs& a, std::ostream& out) {
  a.cfg.validate();
  if (a.hidden == 0) throw ConfigError("--hidden must be positive");
  const auto graph = read_graph(a.graph);
  const auto emb = read_embeddings(a.embeddings);
  const auto labels = read_labels(a.labels);
  check_node_count(graph.size(), emb.rows(), "embedding file");
  check_node_count(graph.size(), labels.size(), "label file");
  const auto ahat = normalize(graph, NormMode::Gcn);
  std::vector<bool> mask(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) mask[i] = labels.masked(i);
  auto model = GcnModel::init(emb.dims(), a.hidden, kNumRoles, a.seed);
  const auto result = train(std::move(model), ahat, emb.to_dense(), labels.onehot(), mask, a.cfg);
  write_checkpoint(result.model, a.output);
  if (!a.loss_csv.empty()) emit(a.loss_csv, encode_loss_history(result.loss_history), out);
}

void cmd_gcn_predict(const GcnPredictArgs& a, std::ostream& out) {
  const auto model = read_checkpoint(a.checkpoint);
  const auto graph = read_graph(a.graph);
  const auto emb = read_embeddings(a.embeddings);
  const auto labels = read_labels(a.labels);
  check_node_count(graph.size(), emb.rows(), "embedding file");
  check_node_count(graph.size(), labels.size(), "label file");
  if (model.num_classes() != kNumRoles)
    throw DimensionError("checkpoint has " + std::to_string(model.num_classes()) + " classes, expected " +
                         std::to_string(kNumRoles));
  const auto ahat = normalize(graph, NormMode::Gcn);
  const auto masked = labels.masked_indices();
  emit(a.output, encode_predictions(predict(model, ahat, emb.to_dense(), masked)), out);
}

void cmd_window(const WindowArgs& a, std::ostream& out) {
  const auto stopwords = a.stopwords.empty() ? StopwordList::english() : StopwordList::load(a.stopwords);
  WindowOptions options = a.options;
  options.clean = !a.no_clean;
  const auto records = read_corpus(a.corpus);
  std::string text;
  windowize_corpus(records, stopwords, options, [&](const WindowedInput& w) { text += encode_windowed(w); });
  emit(a.output, text, out);
}

void cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const auto gold = read_labels(a.labels);
  const auto masked = gold.masked_indices();
  std::vector<EvalReport> reports;
  for (const auto& spec : a.predictions) {
    std::string name;
    std::string path = spec;
    if (auto eq = spec.find('='); eq != std::string::npos && eq > 0) {
      name = spec.substr(0, eq);
      path = spec.substr(eq + 1);
    } else {
      name = fs::path(spec).stem().string();
    }
    const auto preds = read_predictions(path);
    reports.push_back(evaluate(preds, gold, masked, name));
  }
  emit(a.output, render_text(reports), out);
  if (!a.json_output.empty()) emit(a.json_output, render_json(reports), out);
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rhetorical-role sentence classification over similarity graphs", "rolegraph"};
  app.require_subcommand(1);

  BuildGraphArgs bg;
  auto* build = app.add_subcommand("build-graph", "Embeddings (EMB1) to thresholded cosine graph (SGRAPH1)");
  build->add_option("embeddings", bg.embeddings, "EMB1 embedding file")->required();
  build->add_option("-o,--output", bg.output, "Output SGRAPH1 path (default: stdout)");
  build->add_option("--threshold", bg.threshold, "Edge iff cosine > threshold")->capture_default_str();
  build->add_option("--workers", bg.workers, "Threads for the pairwise pass")->check(CLI::PositiveNumber);

  SplitArgs sp;
  auto* split = app.add_subcommand("split", "Corpus + partition to a LABELS1 file with eval sentences masked");
  split->add_option("corpus", sp.corpus, "Corpus JSONL")->required();
  split->add_option("partition", sp.partition, "Partition JSON (doc_id -> train|eval)")->required();
  split->add_option("-o,--output", sp.output, "Output path (default: stdout)");

  DiffuseArgs df;
  auto* diffuse = app.add_subcommand("diffuse", "Label diffusion over the graph; predictions JSONL for masked nodes");
  diffuse->add_option("graph", df.graph, "SGRAPH1 file")->required();
  diffuse->add_option("labels", df.labels, "LABELS1 file")->required();
  diffuse->add_option("-o,--output", df.output, "Output path (default: stdout)");
  diffuse->add_option("--alpha", df.cfg.alpha, "Propagation weight in (0, 1)")->capture_default_str();
  diffuse->add_option("--tol", df.cfg.tol, "Iterative convergence tolerance")->capture_default_str();
  diffuse->add_option("--max-iters", df.cfg.max_iters, "Iteration cap")->capture_default_str();
  auto* closed = diffuse->add_flag("--closed-form", df.closed_form, "Direct sparse solve (default)");
  auto* iter = diffuse->add_flag("--iterative", df.iterative, "Fixed-point iteration");
  closed->excludes(iter);

  GcnTrainArgs gt;
  auto* gcn_train = app.add_subcommand("gcn-train", "Train the two-layer GCN and write a GCN1 checkpoint");
  gcn_train->add_option("graph", gt.graph, "SGRAPH1 file")->required();
  gcn_train->add_option("embeddings", gt.embeddings, "EMB1 file")->required();
  gcn_train->add_option("labels", gt.labels, "LABELS1 file")->required();
  gcn_train->add_option("-o,--output", gt.output, "Checkpoint path")->required();
  gcn_train->add_option("--loss-csv", gt.loss_csv, "Write per-epoch loss as CSV ('-' for stdout)");
  gcn_train->add_option("--hidden", gt.hidden, "Hidden width")->capture_default_str();
  gcn_train->add_option("--lr", gt.cfg.learning_rate, "Adam learning rate")->capture_default_str();
  gcn_train->add_option("--epochs", gt.cfg.epochs, "Full-batch epochs")->capture_default_str();
  gcn_train->add_option("--seed", gt.seed, "Weight initialization seed")->capture_default_str();

  GcnPredictArgs gp;
  auto* gcn_predict = app.add_subcommand("gcn-predict", "Predict masked nodes with a trained GCN1 checkpoint");
  gcn_predict->add_option("checkpoint", gp.checkpoint, "GCN1 checkpoint")->required();
  gcn_predict->add_option("graph", gp.graph, "SGRAPH1 file")->required();
  gcn_predict->add_option("embeddings", gp.embeddings, "EMB1 file")->required();
  gcn_predict->add_option("labels", gp.labels, "LABELS1 file")->required();
  gcn_predict->add_option("-o,--output", gp.output, "Output path (default: stdout)");

  WindowArgs wa;
  auto* window = app.add_subcommand("window", "Five-sentence context inputs as JSONL");
  window->add_option("corpus", wa.corpus, "Corpus JSONL")->required();
  window->add_option("-o,--output", wa.output, "Output path (default: stdout)");
  window->add_option("--pad-token", wa.options.pad, "Filler for slots beyond a document edge")->capture_default_str();
  window->add_option("--separator", wa.options.separator, "Token placed between slots")->capture_default_str();
  window->add_option("--stopwords", wa.stopwords, "Stopword file, one word per line (default: bundled English)");
  window->add_flag("--no-clean", wa.no_clean, "Keep stopwords");

  EvaluateArgs ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score prediction files against gold labels");
  evaluate_cmd->add_option("labels", ev.labels, "LABELS1 file holding gold labels and the mask")->required();
  evaluate_cmd->add_option("predictions", ev.predictions, "Prediction JSONL files, optionally NAME=path")->required();
  evaluate_cmd->add_option("-o,--output", ev.output, "Text report path (default: stdout)");
  evaluate_cmd->add_option("--json", ev.json_output, "JSON report path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "rolegraph: " << e.what() << "\n" << "Run with --help for usage.\n";
    return kExitUsage;
  }

  try {
    if (build->parsed()) cmd_build_graph(bg, out);
    else if (split->parsed()) cmd_split(sp, out);
    else if (diffuse->parsed()) cmd_diffuse(df, out, err);
    else if (gcn_train->parsed()) cmd_gcn_train(gt, out);
    else if (gcn_predict->parsed()) cmd_gcn_predict(gp, out);
    else if (window->parsed()) cmd_window(wa, out);
    else if (evaluate_cmd->parsed()) cmd_evaluate(ev, out);
  } catch (const ConfigError& e) {
    err << "rolegraph: config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "rolegraph: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace rolegraph
