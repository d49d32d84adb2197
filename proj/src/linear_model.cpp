#include <Eigen/Dense>

#include <cmath>

#include "swingnam/models.hpp"

namespace swingnam {

std::string_view to_string(Task task) { return task == Task::Binary ? "binary" : "regression"; }

namespace {

void check_training_inputs(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Task task) {
  if (X.rows() == 0) throw Error(ErrorCode::EmptyDataset, "training set is empty");
  if (X.rows() != y.size()) throw Error(ErrorCode::DimensionMismatch, "feature rows and targets differ in count");
  if (!X.allFinite() || !y.allFinite()) throw Error(ErrorCode::NonFinite, "training data contains non-finite values");
  if (task == Task::Binary) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y(i) != 0.0 && y(i) != 1.0) throw Error(ErrorCode::InvalidArgument, "binary labels must be 0 or 1");
    }
  }
}

// Mean logistic loss, numerically stable: log(1 + e^s) - y s.
double logistic_loss(const Eigen::VectorXd& scores, const Eigen::VectorXd& y) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const double s = scores(i);
    total += std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s))) - y(i) * s;
  }
  return total / static_cast<double>(scores.size());
}

}  // namespace

LinearModel train_linear(const Eigen::MatrixXd& X_raw, const Eigen::VectorXd& y, Task task, const LinearConfig& config) {
  check_training_inputs(X_raw, y, task);
  if (config.l2 < 0.0) throw Error(ErrorCode::InvalidArgument, "l2 must be non-negative");

  LinearModel model;
  model.header.task = task;
  model.header.standardization =
      config.standardize ? Standardizer::fit(X_raw) : Standardizer::identity(X_raw.cols());
  const Eigen::MatrixXd X = config.standardize ? model.header.standardization.transform(X_raw) : X_raw;
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();

  if (task == Task::Regression) {
    Eigen::MatrixXd design(n, d + 1);
    design.leftCols(d) = X;
    design.col(d).setOnes();
    Eigen::VectorXd theta;
    if (config.l2 == 0.0) {
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
      if (qr.rank() < d + 1) {
        throw Error(ErrorCode::SingularSystem, "design matrix is rank deficient (rank " + std::to_string(qr.rank()) +
                                                   " of " + std::to_string(d + 1) + ") and l2 is 0");
      }
      theta = qr.solve(y);
    } else {
      const double inv_n = 1.0 / static_cast<double>(n);
      Eigen::MatrixXd normal = design.transpose() * design * inv_n;
      normal.diagonal().head(d).array() += config.l2;
      const Eigen::VectorXd rhs = design.transpose() * y * inv_n;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
      if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "normal equations not solvable");
      theta = ldlt.solve(rhs);
    }
    if (!theta.allFinite()) throw Error(ErrorCode::NonFinite, "regression solution is not finite");
    model.weights = theta.head(d);
    model.bias = theta(d);
    return model;
  }

  if (!(config.learning_rate > 0.0) || config.epochs <= 0) {
    throw Error(ErrorCode::InvalidArgument, "learning_rate and epochs must be positive");
  }
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const Eigen::VectorXd scores = (X * w).array() + b;
    Eigen::VectorXd residual(n);
    for (Eigen::Index i = 0; i < n; ++i) residual(i) = logistic(scores(i)) - y(i);
    const Eigen::VectorXd grad_w = X.transpose() * residual * inv_n + 2.0 * config.l2 * w;
    const double grad_b = residual.sum() * inv_n;
    w -= config.learning_rate * grad_w;
    b -= config.learning_rate * grad_b;
    if (!w.allFinite() || !std::isfinite(b)) {
      throw Error(ErrorCode::NonFinite, "logistic regression diverged at epoch " + std::to_string(epoch + 1));
    }
  }
  const double final_loss = logistic_loss((X * w).array() + b, y);
  if (!std::isfinite(final_loss)) throw Error(ErrorCode::NonFinite, "logistic loss is not finite");
  model.weights = w;
  model.bias = b;
  return model;
}

double decision_value(const LinearModel& model, const Eigen::VectorXd& raw) {
  if (raw.size() != model.weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(model.weights.size()) + " features, got " +
                                                  std::to_string(raw.size()));
  }
  return model.weights.dot(model.header.standardization.transform(raw)) + model.bias;
}

double predict(const LinearModel& model, const Eigen::VectorXd& raw) {
  const double z = decision_value(model, raw);
  return model.header.task == Task::Binary ? logistic(z) : z;
}

}  // namespace swingnam
