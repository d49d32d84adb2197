#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "swingnam/features.hpp"

namespace swingnam {

enum class Task : std::uint8_t { Regression, Binary };
std::string_view to_string(Task task);
inline Task task_for(Target target) { return is_binary(target) ? Task::Binary : Task::Regression; }

inline double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Shared model metadata: what the inputs are and how to map raw features into
// the space the parameters were fit in.
struct ModelHeader {
  Task task = Task::Regression;
  std::string target;
  std::vector<std::string> feature_names;
  Standardizer standardization;
};

// ---- linear / logistic regression ---------------------------------------

struct LinearModel {
  ModelHeader header;
  Eigen::VectorXd weights;
  double bias = 0.0;
};

struct LinearConfig {
  // Ridge penalty on the weights (not the bias).
  double l2 = 0.0;
  // Full-batch gradient descent settings for the logistic fit.
  double learning_rate = 0.5;
  int epochs = 2000;
  // Fit a Standardizer on the training matrix and store it in the model.
  bool standardize = false;
};

// Regression: closed-form ridge normal equations; with l2 == 0 a rank-deficient
// design raises SingularSystem. Binary: labels in {0, 1}, full-batch gradient
// descent on the mean logistic loss from a zero start.
LinearModel train_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Task task, const LinearConfig& config = {});

// ---- additive model -----------------------------------------------------

enum class Activation : std::uint8_t { Softplus, Tanh };
std::string_view to_string(Activation activation);

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

// Scalar-to-scalar feed-forward network; activation on every hidden layer,
// linear output.
struct ShapeNet {
  std::vector<DenseLayer> layers;
  Activation activation = Activation::Softplus;

  double operator()(double z) const;
  // Row vector of outputs for a batch of standardized inputs.
  Eigen::RowVectorXd operator()(const Eigen::RowVectorXd& z) const;
  Eigen::Index parameter_count() const;
};

struct AdditiveModel {
  ModelHeader header;
  std::vector<ShapeNet> subnets;
  double bias = 0.0;
};

enum class Optimizer : std::uint8_t { Adam, Sgd };
std::string_view to_string(Optimizer optimizer);

struct TrainingConfig {
  double learning_rate = 0.01;
  int epochs = 200;
  int batch_size = 128;
  // Penalty weight on the sum of squared weight-matrix entries.
  double l2_penalty = 1e-5;
  // Penalty weight on the mean of f_i(x_i)^2 over samples and features.
  double output_penalty = 1e-3;
  std::uint64_t seed = 42;
  std::vector<int> hidden_sizes = {64, 32};
  Activation activation = Activation::Softplus;
  Optimizer optimizer = Optimizer::Adam;
  bool standardize = true;

  void validate() const;
};

// Random initialization from config.seed: Glorot-uniform weights, first-layer
// biases spread so each unit kinks inside [-2, 2], other biases zero.
AdditiveModel init_additive_model(Eigen::Index features, Task task, const TrainingConfig& config);

struct TrainingTrace {
  // Total training loss on the full train set; entry 0 is before the first update.
  std::vector<double> epoch_loss;
};

// Mini-batch training of every subnet and the bias jointly. After training,
// each subnet's mean output over the train set is folded into the bias so the
// shape functions are centred.
AdditiveModel train_nam(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Task task,
                        const TrainingConfig& config = {}, TrainingTrace* trace = nullptr);

// All trainable parameters in a fixed order: per subnet, per layer, the
// weight matrix (column-major) then its bias; the global bias last.
Eigen::VectorXd flatten_parameters(const AdditiveModel& model);
void assign_parameters(AdditiveModel& model, const Eigen::VectorXd& params);

// Total loss (data + output penalty + l2) on already-standardized inputs `Z`.
// When `gradient` is non-null it receives d loss / d params in
// flatten_parameters order.
double nam_loss(const AdditiveModel& model, const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                const TrainingConfig& config, Eigen::VectorXd* gradient = nullptr);

// Per-feature contributions f_i(x_i) for a raw feature vector.
Eigen::VectorXd contributions(const AdditiveModel& model, const Eigen::VectorXd& raw);

// Sum of contributions plus bias, before any link function.
double decision_value(const AdditiveModel& model, const Eigen::VectorXd& raw);
double decision_value(const LinearModel& model, const Eigen::VectorXd& raw);

// Regression output, or probability of the positive class for binary models.
double predict(const AdditiveModel& model, const Eigen::VectorXd& raw);
double predict(const LinearModel& model, const Eigen::VectorXd& raw);

// (x, f_i(x)) at raw feature values `grid`.
std::vector<std::pair<double, double>> shape_function(const AdditiveModel& model, std::size_t feature,
                                                      std::span<const double> grid);

// ---- persistence ----------------------------------------------------------

using Model = std::variant<LinearModel, AdditiveModel>;

const ModelHeader& header_of(const Model& model);
double predict(const Model& model, const Eigen::VectorXd& raw);
Eigen::VectorXd predict_rows(const Model& model, const Eigen::MatrixXd& raw);

inline constexpr int kModelFormatVersion = 1;

// JSON envelope {version, task, schema_fingerprint, standardization,
// model_kind, parameters}.
std::string serialize_model(const Model& model);
Model parse_model(std::string_view text, std::string_view source_name = "<memory>");
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace swingnam
