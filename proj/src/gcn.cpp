#include "rolegraph/gcn.hpp"

#include "rolegraph/error.hpp"

#include <bit>
#include <cmath>
#include <random>

namespace rolegraph {

namespace {

struct Activations {
  Eigen::MatrixXd ax;      // Â X
  Eigen::MatrixXd pre;     // Â X W0
  Eigen::MatrixXd hidden;  // ReLU(pre)
  Eigen::MatrixXd ah;      // Â hidden
  Eigen::MatrixXd logits;  // Â hidden W1
};

void check_finite(const Eigen::MatrixXd& m, const char* layer) {
  if (!m.allFinite()) throw NumericalError(std::string("non-finite values in GCN layer '") + layer + "'");
}

void check_shapes(const GcnModel& model, const NormalizedGraph& ahat, const Eigen::MatrixXd& x) {
  if (ahat.mode != NormMode::Gcn) throw ConfigError("GCN needs a gcn-normalized graph (self-loops added)");
  if (x.rows() != ahat.matrix.rows())
    throw DimensionError("feature matrix has " + std::to_string(x.rows()) + " rows but the graph has " +
                         std::to_string(ahat.matrix.rows()) + " nodes");
  if (x.cols() != model.w0.rows())
    throw DimensionError("feature dimension " + std::to_string(x.cols()) + " does not match model input " +
                         std::to_string(model.w0.rows()));
  if (model.w0.cols() != model.w1.rows()) throw DimensionError("model hidden dimensions disagree");
  if (model.w1.cols() < 1 || model.w0.cols() < 1) throw DimensionError("model has an empty layer");
}

Activations run_layers(const GcnModel& model, const NormalizedGraph& ahat, const Eigen::MatrixXd& ax) {
  Activations a;
  a.ax = ax;
  a.pre.noalias() = a.ax * model.w0;
  check_finite(a.pre, "conv1");
  a.hidden = a.pre.cwiseMax(0.0);
  a.ah = ahat.matrix * a.hidden;
  a.logits.noalias() = a.ah * model.w1;
  check_finite(a.logits, "conv2");
  return a;
}

// Row-wise log-softmax with max subtraction.
Eigen::MatrixXd log_softmax(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    const double lse = mx + std::log((logits.row(i).array() - mx).exp().sum());
    out.row(i) = logits.row(i).array() - lse;
  }
  return out;
}

Eigen::MatrixXd softmax(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const Eigen::RowVectorXd e = (logits.row(i).array() - logits.row(i).maxCoeff()).exp();
    out.row(i) = e / e.sum();
  }
  return out;
}

LossAndGrads loss_and_grads_from(const GcnModel& model, const NormalizedGraph& ahat, const Eigen::MatrixXd& ax,
                                 const Eigen::MatrixXd& targets, const std::vector<bool>& mask) {
  const auto n = ax.rows();
  if (targets.rows() != n || targets.cols() != model.w1.cols())
    throw DimensionError("target matrix must be " + std::to_string(n) + " x " + std::to_string(model.w1.cols()));
  if (mask.size() != static_cast<std::size_t>(n)) throw DimensionError("mask length does not match node count");
  std::size_t labeled = 0;
  for (bool m : mask) labeled += m ? 0 : 1;
  if (labeled == 0) throw CorpusError("GCN loss needs at least one unmasked node");

  const Activations a = run_layers(model, ahat, ax);
  const Eigen::MatrixXd logp = log_softmax(a.logits);
  const double inv_m = 1.0 / static_cast<double>(labeled);

  // d loss / d logits = (softmax - target) / m on labeled rows, zero elsewhere.
  Eigen::MatrixXd dlogits = Eigen::MatrixXd::Zero(n, targets.cols());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (mask[static_cast<std::size_t>(i)]) continue;
    loss -= targets.row(i).dot(logp.row(i));
    dlogits.row(i) = (logp.row(i).array().exp() * targets.row(i).sum() - targets.row(i).array()) * inv_m;
  }
  loss *= inv_m;

  LossAndGrads out;
  out.loss = loss;
  out.grad_w1.noalias() = a.ah.transpose() * dlogits;
  const Eigen::MatrixXd d_ah = dlogits * model.w1.transpose();
  // Â is symmetric, so Âᵀ d_ah = Â d_ah.
  Eigen::MatrixXd d_pre = ahat.matrix * d_ah;
  d_pre = d_pre.cwiseProduct((a.pre.array() > 0.0).cast<double>().matrix());
  out.grad_w0.noalias() = a.ax.transpose() * d_pre;
  return out;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32(std::string_view bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
  return v;
}

}  // namespace

GcnModel GcnModel::init(std::size_t d, std::size_t h, std::size_t k, std::uint64_t seed) {
  if (d == 0 || h == 0 || k == 0) throw ConfigError("GCN dimensions must be positive");
  std::mt19937_64 rng(seed);
  auto glorot = [&](std::size_t fan_in, std::size_t fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Eigen::MatrixXd w(fan_in, fan_out);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        w(i, j) = (2.0 * u - 1.0) * limit;
      }
    return w;
  };
  GcnModel m;
  m.w0 = glorot(d, h);
  m.w1 = glorot(h, k);
  return m;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning rate must be positive");
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw ConfigError("Adam moment decays must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("Adam epsilon must be positive");
}

Eigen::MatrixXd forward(const GcnModel& model, const NormalizedGraph& ahat, const Eigen::MatrixXd& x) {
  check_shapes(model, ahat, x);
  const Eigen::MatrixXd ax = ahat.matrix * x;
  return softmax(run_layers(model, ahat, ax).logits);
}

LossAndGrads loss_and_grads(const GcnModel& model, const NormalizedGraph& ahat, const Eigen::MatrixXd& x,
                            const Eigen::MatrixXd& targets, const std::vector<bool>& mask) {
  check_shapes(model, ahat, x);
  return loss_and_grads_from(model, ahat, ahat.matrix * x, targets, mask);
}

TrainResult train(GcnModel model, const NormalizedGraph& ahat, const Eigen::MatrixXd& x,
                  const Eigen::MatrixXd& targets, const std::vector<bool>& mask, const TrainConfig& cfg) {
  cfg.validate();
  check_shapes(model, ahat, x);
  const Eigen::MatrixXd ax = ahat.matrix * x;

  Eigen::MatrixXd m0 = Eigen::MatrixXd::Zero(model.w0.rows(), model.w0.cols());
  Eigen::MatrixXd v0 = m0;
  Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(model.w1.rows(), model.w1.cols());
  Eigen::MatrixXd v1 = m1;

  auto adam_step = [&](Eigen::MatrixXd& w, Eigen::MatrixXd& m, Eigen::MatrixXd& v, const Eigen::MatrixXd& g,
                       double c1, double c2) {
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
    w.array() -= cfg.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.epsilon);
  };

  TrainResult result{std::move(model), {}};
  result.loss_history.reserve(static_cast<std::size_t>(cfg.epochs));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    LossAndGrads lg;
    try {
      lg = loss_and_grads_from(result.model, ahat, ax, targets, mask);
    } catch (const NumericalError& e) {
      throw NumericalError("training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
    }
    if (!std::isfinite(lg.loss)) throw NumericalError("training diverged at epoch " + std::to_string(epoch) + ": loss is not finite");
    result.loss_history.push_back(lg.loss);
    const double c1 = 1.0 - std::pow(cfg.beta1, epoch + 1);
    const double c2 = 1.0 - std::pow(cfg.beta2, epoch + 1);
    adam_step(result.model.w0, m0, v0, lg.grad_w0, c1, c2);
    adam_step(result.model.w1, m1, v1, lg.grad_w1, c1, c2);
    if (!result.model.w0.allFinite() || !result.model.w1.allFinite())
      throw NumericalError("training diverged at epoch " + std::to_string(epoch) + ": weights are not finite");
  }
  return result;
}

std::vector<Prediction> predict(const GcnModel& model, const NormalizedGraph& ahat, const Eigen::MatrixXd& x,
                                std::span<const std::size_t> masked_indices) {
  return predict_rows(forward(model, ahat, x), masked_indices);
}

// ---------------------------------------------------------------------------
// GCN1 checkpoints

std::string encode_checkpoint(const GcnModel& model) {
  std::string out = "GCN1";
  put_u32(out, static_cast<std::uint32_t>(model.input_dim()));
  put_u32(out, static_cast<std::uint32_t>(model.hidden_dim()));
  put_u32(out, static_cast<std::uint32_t>(model.num_classes()));
  for (const auto* w : {&model.w0, &model.w1})
    for (Eigen::Index i = 0; i < w->rows(); ++i)
      for (Eigen::Index j = 0; j < w->cols(); ++j) {
        const auto f = static_cast<float>((*w)(i, j));
        if (!std::isfinite(f)) throw NumericalError("checkpoint: weight not representable as a finite f32");
        put_u32(out, std::bit_cast<std::uint32_t>(f));
      }
  return out;
}

GcnModel decode_checkpoint(std::string_view bytes) {
  if (bytes.size() < 16 || bytes.substr(0, 4) != "GCN1") throw FormatError("GCN1: bad magic or truncated header");
  const std::uint64_t d = get_u32(bytes, 4);
  const std::uint64_t h = get_u32(bytes, 8);
  const std::uint64_t k = get_u32(bytes, 12);
  if (d == 0 || h == 0 || k == 0) throw FormatError("GCN1: zero dimension");
  const std::uint64_t expected = 16 + 4 * (d * h + h * k);
  if (bytes.size() != expected)
    throw FormatError("GCN1: expected " + std::to_string(expected) + " bytes, found " + std::to_string(bytes.size()));
  GcnModel m;
  m.w0.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(h));
  m.w1.resize(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(k));
  std::size_t at = 16;
  for (auto* w : {&m.w0, &m.w1})
    for (Eigen::Index i = 0; i < w->rows(); ++i)
      for (Eigen::Index j = 0; j < w->cols(); ++j, at += 4) {
        const float f = std::bit_cast<float>(get_u32(bytes, at));
        if (!std::isfinite(f)) throw FormatError("GCN1: non-finite weight");
        (*w)(i, j) = f;
      }
  return m;
}

void write_checkpoint(const GcnModel& model, const std::filesystem::path& path) {
  write_file(path, encode_checkpoint(model));
}

GcnModel read_checkpoint(const std::filesystem::path& path) { return decode_checkpoint(read_file(path)); }

std::string encode_loss_history(std::span<const double> history) {
  std::string out = "epoch,loss\n";
  for (std::size_t e = 0; e < history.size(); ++e) out += std::to_string(e) + "," + format_double(history[e]) + "\n";
  return out;
}

}  // namespace rolegraph
