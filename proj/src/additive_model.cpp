#include <cmath>
#include <numeric>

#include "swingnam/models.hpp"
#include "swingnam/random.hpp"

namespace swingnam {

namespace {

double activate(Activation activation, double p) {
  if (activation == Activation::Tanh) return std::tanh(p);
  return std::max(p, 0.0) + std::log1p(std::exp(-std::abs(p)));
}

// Derivative expressed through the pre-activation value.
double activate_derivative(Activation activation, double p) {
  if (activation == Activation::Tanh) {
    const double t = std::tanh(p);
    return 1.0 - t * t;
  }
  return logistic(p);
}

// Forward pass that keeps every layer's pre-activation and activation for
// backpropagation. acts[0] is the input row.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> pre;
  std::vector<Eigen::MatrixXd> acts;
};

Eigen::RowVectorXd forward(const ShapeNet& net, const Eigen::RowVectorXd& z, ForwardCache* cache) {
  Eigen::MatrixXd a = z;
  if (cache) {
    cache->pre.clear();
    cache->acts.clear();
    cache->acts.push_back(a);
  }
  const std::size_t last = net.layers.size() - 1;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const DenseLayer& layer = net.layers[l];
    Eigen::MatrixXd p = layer.weight * a;
    p.colwise() += layer.bias;
    if (l == last) {
      return p.row(0);
    }
    a = p.unaryExpr([&](double v) { return activate(net.activation, v); });
    if (cache) {
      cache->pre.push_back(std::move(p));
      cache->acts.push_back(a);
    }
  }
  return a.row(0);
}

void check_config_and_data(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Task task) {
  if (X.rows() == 0) throw Error(ErrorCode::EmptyDataset, "training set is empty");
  if (X.cols() == 0) throw Error(ErrorCode::InvalidArgument, "training set has no features");
  if (X.rows() != y.size()) throw Error(ErrorCode::DimensionMismatch, "feature rows and targets differ in count");
  if (!X.allFinite() || !y.allFinite()) throw Error(ErrorCode::NonFinite, "training data contains non-finite values");
  if (task == Task::Binary) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y(i) != 0.0 && y(i) != 1.0) throw Error(ErrorCode::InvalidArgument, "binary labels must be 0 or 1");
    }
  }
}

std::vector<std::string> default_feature_names(Eigen::Index d) {
  std::vector<std::string> names;
  for (Eigen::Index i = 0; i < d; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

}  // namespace

std::string_view to_string(Activation activation) { return activation == Activation::Tanh ? "tanh" : "softplus"; }
std::string_view to_string(Optimizer optimizer) { return optimizer == Optimizer::Sgd ? "sgd" : "adam"; }

double ShapeNet::operator()(double z) const {
  Eigen::RowVectorXd row(1);
  row(0) = z;
  return forward(*this, row, nullptr)(0);
}

Eigen::RowVectorXd ShapeNet::operator()(const Eigen::RowVectorXd& z) const { return forward(*this, z, nullptr); }

Eigen::Index ShapeNet::parameter_count() const {
  Eigen::Index count = 0;
  for (const DenseLayer& layer : layers) count += layer.weight.size() + layer.bias.size();
  return count;
}

void TrainingConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::InvalidArgument, "learning_rate must be positive");
  }
  if (epochs <= 0) throw Error(ErrorCode::InvalidArgument, "epochs must be positive");
  if (batch_size <= 0) throw Error(ErrorCode::InvalidArgument, "batch_size must be positive");
  if (l2_penalty < 0.0 || output_penalty < 0.0) throw Error(ErrorCode::InvalidArgument, "penalties must be non-negative");
  for (int h : hidden_sizes) {
    if (h <= 0) throw Error(ErrorCode::InvalidArgument, "hidden sizes must be positive");
  }
}

AdditiveModel init_additive_model(Eigen::Index features, Task task, const TrainingConfig& config) {
  config.validate();
  Rng rng(config.seed);
  AdditiveModel model;
  model.header.task = task;
  model.header.feature_names = default_feature_names(features);
  model.header.standardization = Standardizer::identity(features);

  std::vector<int> sizes = {1};
  sizes.insert(sizes.end(), config.hidden_sizes.begin(), config.hidden_sizes.end());
  sizes.push_back(1);
  for (Eigen::Index i = 0; i < features; ++i) {
    ShapeNet net;
    net.activation = config.activation;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      const int fan_in = sizes[l];
      const int fan_out = sizes[l + 1];
      const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
      DenseLayer layer{Eigen::MatrixXd(fan_out, fan_in), Eigen::VectorXd::Zero(fan_out)};
      // Column-major fill keeps the draw order tied to flatten_parameters.
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) layer.weight(r, c) = rng.uniform(-limit, limit);
      }
      // Spread the first layer's kinks across the standardized input range.
      if (l == 0 && sizes.size() > 2) {
        for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = rng.uniform(-2.0, 2.0) * std::abs(layer.weight(r, 0));
      }
      net.layers.push_back(std::move(layer));
    }
    model.subnets.push_back(std::move(net));
  }
  return model;
}

Eigen::VectorXd flatten_parameters(const AdditiveModel& model) {
  Eigen::Index total = 1;
  for (const ShapeNet& net : model.subnets) total += net.parameter_count();
  Eigen::VectorXd params(total);
  Eigen::Index offset = 0;
  for (const ShapeNet& net : model.subnets) {
    for (const DenseLayer& layer : net.layers) {
      params.segment(offset, layer.weight.size()) = Eigen::Map<const Eigen::VectorXd>(layer.weight.data(), layer.weight.size());
      offset += layer.weight.size();
      params.segment(offset, layer.bias.size()) = layer.bias;
      offset += layer.bias.size();
    }
  }
  params(offset) = model.bias;
  return params;
}

void assign_parameters(AdditiveModel& model, const Eigen::VectorXd& params) {
  Eigen::Index total = 1;
  for (const ShapeNet& net : model.subnets) total += net.parameter_count();
  if (params.size() != total) throw Error(ErrorCode::DimensionMismatch, "parameter vector has the wrong length");
  Eigen::Index offset = 0;
  for (ShapeNet& net : model.subnets) {
    for (DenseLayer& layer : net.layers) {
      Eigen::Map<Eigen::VectorXd>(layer.weight.data(), layer.weight.size()) = params.segment(offset, layer.weight.size());
      offset += layer.weight.size();
      layer.bias = params.segment(offset, layer.bias.size());
      offset += layer.bias.size();
    }
  }
  model.bias = params(offset);
}

double nam_loss(const AdditiveModel& model, const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                const TrainingConfig& config, Eigen::VectorXd* gradient) {
  const Eigen::Index n = Z.rows();
  const auto d = static_cast<Eigen::Index>(model.subnets.size());
  if (Z.cols() != d) throw Error(ErrorCode::DimensionMismatch, "input width does not match subnet count");
  if (y.size() != n || n == 0) throw Error(ErrorCode::DimensionMismatch, "targets do not match inputs");

  const double inv_n = 1.0 / static_cast<double>(n);
  const double penalty_scale = config.output_penalty / static_cast<double>(n * d);

  std::vector<ForwardCache> caches(gradient ? static_cast<std::size_t>(d) : 0);
  Eigen::MatrixXd F(d, n);
  for (Eigen::Index i = 0; i < d; ++i) {
    F.row(i) = forward(model.subnets[static_cast<std::size_t>(i)], Z.col(i).transpose(),
                       gradient ? &caches[static_cast<std::size_t>(i)] : nullptr);
  }
  const Eigen::VectorXd scores = (F.colwise().sum().transpose().array() + model.bias).matrix();

  double data_loss = 0.0;
  Eigen::VectorXd d_scores(n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const double s = scores(b);
    if (model.header.task == Task::Regression) {
      const double r = s - y(b);
      data_loss += r * r;
      d_scores(b) = 2.0 * r * inv_n;
    } else {
      data_loss += std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s))) - y(b) * s;
      d_scores(b) = (logistic(s) - y(b)) * inv_n;
    }
  }
  data_loss *= inv_n;

  double weight_norm = 0.0;
  for (const ShapeNet& net : model.subnets) {
    for (const DenseLayer& layer : net.layers) weight_norm += layer.weight.squaredNorm();
  }
  const double loss = data_loss + penalty_scale * F.squaredNorm() + config.l2_penalty * weight_norm;
  if (!gradient) return loss;

  Eigen::Index total = 1;
  for (const ShapeNet& net : model.subnets) total += net.parameter_count();
  gradient->resize(total);
  Eigen::Index offset = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const ShapeNet& net = model.subnets[static_cast<std::size_t>(i)];
    const ForwardCache& cache = caches[static_cast<std::size_t>(i)];
    // d loss / d f_i(x_i) for every sample.
    Eigen::MatrixXd delta = (d_scores.transpose() + 2.0 * penalty_scale * F.row(i)).eval();

    std::vector<Eigen::MatrixXd> grad_w(net.layers.size());
    std::vector<Eigen::VectorXd> grad_b(net.layers.size());
    for (std::size_t l = net.layers.size(); l-- > 0;) {
      const DenseLayer& layer = net.layers[l];
      grad_w[l] = delta * cache.acts[l].transpose() + 2.0 * config.l2_penalty * layer.weight;
      grad_b[l] = delta.rowwise().sum();
      if (l > 0) {
        Eigen::MatrixXd back = layer.weight.transpose() * delta;
        const Eigen::MatrixXd& pre = cache.pre[l - 1];
        for (Eigen::Index c = 0; c < back.cols(); ++c) {
          for (Eigen::Index r = 0; r < back.rows(); ++r) back(r, c) *= activate_derivative(net.activation, pre(r, c));
        }
        delta = std::move(back);
      }
    }
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
      gradient->segment(offset, grad_w[l].size()) = Eigen::Map<const Eigen::VectorXd>(grad_w[l].data(), grad_w[l].size());
      offset += grad_w[l].size();
      gradient->segment(offset, grad_b[l].size()) = grad_b[l];
      offset += grad_b[l].size();
    }
  }
  (*gradient)(offset) = d_scores.sum();
  return loss;
}

AdditiveModel train_nam(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Task task, const TrainingConfig& config,
                        TrainingTrace* trace) {
  config.validate();
  check_config_and_data(X, y, task);

  AdditiveModel model = init_additive_model(X.cols(), task, config);
  model.header.standardization = config.standardize ? Standardizer::fit(X) : Standardizer::identity(X.cols());
  const Eigen::MatrixXd Z = config.standardize ? model.header.standardization.transform(X) : X;
  const Eigen::Index n = Z.rows();

  // Start the bias at the target mean (log-odds for binary) so early epochs
  // shape the subnets instead of chasing the offset.
  const double mean_y = y.mean();
  if (task == Task::Regression) {
    model.bias = mean_y;
  } else if (mean_y > 0.0 && mean_y < 1.0) {
    model.bias = std::log(mean_y / (1.0 - mean_y));
  }

  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Eigen::Index batch = std::min<Eigen::Index>(config.batch_size, n);

  Eigen::VectorXd params = flatten_parameters(model);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(params.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(params.size());
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  long step = 0;

  if (trace) {
    trace->epoch_loss.clear();
    trace->epoch_loss.push_back(nam_loss(model, Z, y, config));
  }

  Eigen::MatrixXd Zb;
  Eigen::VectorXd yb;
  Eigen::VectorXd grad;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (batch < n) rng.shuffle(order);
    for (Eigen::Index start = 0; start < n; start += batch) {
      const Eigen::Index len = std::min(batch, n - start);
      Zb.resize(len, Z.cols());
      yb.resize(len);
      for (Eigen::Index k = 0; k < len; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(start + k)];
        Zb.row(k) = Z.row(src);
        yb(k) = y(src);
      }
      const double loss = nam_loss(model, Zb, yb, config, &grad);
      if (!std::isfinite(loss) || !grad.allFinite()) {
        throw Error(ErrorCode::NonFinite, "additive model training diverged at epoch " + std::to_string(epoch));
      }
      ++step;
      if (config.optimizer == Optimizer::Adam) {
        m = beta1 * m + (1.0 - beta1) * grad;
        v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
        const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
        params.array() -= config.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
      } else {
        params -= config.learning_rate * grad;
      }
      assign_parameters(model, params);
    }
    if (trace) {
      const double full = nam_loss(model, Z, y, config);
      if (!std::isfinite(full)) {
        throw Error(ErrorCode::NonFinite, "additive model training diverged at epoch " + std::to_string(epoch));
      }
      trace->epoch_loss.push_back(full);
    }
  }

  // Centre every shape function on the training distribution.
  for (Eigen::Index i = 0; i < Z.cols(); ++i) {
    ShapeNet& net = model.subnets[static_cast<std::size_t>(i)];
    const double offset = net(Eigen::RowVectorXd(Z.col(i).transpose())).mean();
    net.layers.back().bias(0) -= offset;
    model.bias += offset;
  }
  if (!std::isfinite(model.bias)) throw Error(ErrorCode::NonFinite, "additive model bias is not finite");
  return model;
}

Eigen::VectorXd contributions(const AdditiveModel& model, const Eigen::VectorXd& raw) {
  const auto d = static_cast<Eigen::Index>(model.subnets.size());
  if (raw.size() != d) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(d) + " features, got " + std::to_string(raw.size()));
  }
  Eigen::VectorXd out(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    out(i) = model.subnets[static_cast<std::size_t>(i)](model.header.standardization.transform(i, raw(i)));
  }
  return out;
}

double decision_value(const AdditiveModel& model, const Eigen::VectorXd& raw) {
  return contributions(model, raw).sum() + model.bias;
}

double predict(const AdditiveModel& model, const Eigen::VectorXd& raw) {
  const double z = decision_value(model, raw);
  return model.header.task == Task::Binary ? logistic(z) : z;
}

std::vector<std::pair<double, double>> shape_function(const AdditiveModel& model, std::size_t feature,
                                                      std::span<const double> grid) {
  if (feature >= model.subnets.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "feature index " + std::to_string(feature) + " out of range");
  }
  const ShapeNet& net = model.subnets[feature];
  const auto column = static_cast<Eigen::Index>(feature);
  std::vector<std::pair<double, double>> curve;
  curve.reserve(grid.size());
  for (double x : grid) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, "shape-function grid contains a non-finite value");
    curve.emplace_back(x, net(model.header.standardization.transform(column, x)));
  }
  return curve;
}

}  // namespace swingnam
