#include <doctest.h>

#include <json.hpp>

#include "support.hpp"
#include "swingnam/evaluation.hpp"
#include "swingnam/models.hpp"

using namespace swingnam;
using support::error_code_of;

namespace {

TrainingConfig small_config(std::uint64_t seed = 1) {
  TrainingConfig c;
  c.hidden_sizes = {8, 4};
  c.epochs = 30;
  c.batch_size = 32;
  c.learning_rate = 0.02;
  c.seed = seed;
  return c;
}

Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double sd = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.normal(0, sd);
  }
  return m;
}

Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n, double sd = 1.0) { return random_matrix(rng, n, 1, sd).col(0); }

// Planted additive regression data.
void regression_data(Rng& rng, Eigen::MatrixXd& X, Eigen::VectorXd& y, Eigen::Index n = 150) {
  X = random_matrix(rng, n, 3);
  X.col(1) = X.col(1) * 4.0 + Eigen::VectorXd::Constant(n, 10.0);
  y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = std::sin(X(i, 0)) + 0.1 * X(i, 1) - X(i, 2) * X(i, 2) + 0.1 * rng.normal();
}

}  // namespace

TEST_CASE("NAM prediction is the sum of contributions plus bias") {
  Rng rng(41);
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  regression_data(rng, X, y);
  for (Task task : {Task::Regression, Task::Binary}) {
    Eigen::VectorXd target = y;
    if (task == Task::Binary) {
      for (Eigen::Index i = 0; i < y.size(); ++i) target(i) = y(i) > 0.0 ? 1.0 : 0.0;
    }
    const AdditiveModel model = train_nam(X, target, task, small_config());
    for (int i = 0; i < 100; ++i) {
      const Eigen::VectorXd x = random_vector(rng, 3, 3.0);
      const double pre_link = decision_value(model, x);
      CHECK(std::abs(pre_link - model.bias - contributions(model, x).sum()) < 1e-9);
      const double p = predict(model, x);
      CHECK(p == (task == Task::Binary ? logistic(pre_link) : pre_link));
    }
  }
}

TEST_CASE("analytic gradients match central differences") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    TrainingConfig config;
    config.hidden_sizes = {static_cast<int>(2 + rng.below(5)), static_cast<int>(2 + rng.below(4))};
    config.activation = trial % 2 ? Activation::Tanh : Activation::Softplus;
    config.l2_penalty = 1e-2;
    config.output_penalty = 1e-1;
    config.seed = static_cast<std::uint64_t>(trial);
    const Task task = trial % 3 == 0 ? Task::Regression : Task::Binary;
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.below(3));
    AdditiveModel model = init_additive_model(d, task, config);
    Eigen::VectorXd params = flatten_parameters(model);
    for (Eigen::Index k = 0; k < params.size(); ++k) params(k) += rng.normal(0, 0.3);
    assign_parameters(model, params);

    const Eigen::MatrixXd Z = random_matrix(rng, 9, d);
    Eigen::VectorXd y = random_vector(rng, 9);
    if (task == Task::Binary) {
      for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = y(i) > 0 ? 1.0 : 0.0;
    }
    Eigen::VectorXd analytic;
    nam_loss(model, Z, y, config, &analytic);
    REQUIRE(analytic.size() == params.size());

    Eigen::VectorXd numeric(params.size());
    const double h = 1e-5;
    AdditiveModel probe = model;
    for (Eigen::Index k = 0; k < params.size(); ++k) {
      Eigen::VectorXd p = params;
      p(k) += h;
      assign_parameters(probe, p);
      const double up = nam_loss(probe, Z, y, config);
      p(k) -= 2 * h;
      assign_parameters(probe, p);
      const double down = nam_loss(probe, Z, y, config);
      numeric(k) = (up - down) / (2 * h);
    }
    const double rel = (analytic - numeric).norm() / std::max(analytic.norm(), numeric.norm());
    INFO("trial ", trial, " relative error ", rel);
    CHECK(rel < 1e-4);
  }
}

TEST_CASE("full-batch gradient descent does not increase the loss") {
  Rng rng(43);
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  regression_data(rng, X, y, 120);
  TrainingConfig config = small_config();
  config.optimizer = Optimizer::Sgd;
  config.batch_size = 1000;
  config.learning_rate = 0.01;
  config.epochs = 10;
  TrainingTrace trace;
  train_nam(X, y, Task::Regression, config, &trace);
  REQUIRE(trace.epoch_loss.size() == 11);
  for (std::size_t e = 1; e < trace.epoch_loss.size(); ++e) CHECK(trace.epoch_loss[e] <= trace.epoch_loss[e - 1]);
}

TEST_CASE("trained subnets are centred on the training data") {
  Rng rng(44);
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  regression_data(rng, X, y);
  const AdditiveModel model = train_nam(X, y, Task::Regression, small_config());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
  for (Eigen::Index i = 0; i < X.rows(); ++i) mean += contributions(model, X.row(i).transpose());
  mean /= static_cast<double>(X.rows());
  CHECK(mean.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("training is deterministic in the seed") {
  Rng rng(45);
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  regression_data(rng, X, y);
  const auto a = flatten_parameters(train_nam(X, y, Task::Regression, small_config(3)));
  const auto b = flatten_parameters(train_nam(X, y, Task::Regression, small_config(3)));
  const auto c = flatten_parameters(train_nam(X, y, Task::Regression, small_config(4)));
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("affine feature rescaling leaves predictions unchanged") {
  Rng rng(46);
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  regression_data(rng, X, y);
  Eigen::MatrixXd doubled = X;
  doubled.col(1) *= 2.0;
  Eigen::MatrixXd affine = X;
  affine.col(0) = affine.col(0) * 3.3 + Eigen::VectorXd::Constant(X.rows(), -7.0);

  const AdditiveModel base = train_nam(X, y, Task::Regression, small_config());
  const AdditiveModel twice = train_nam(doubled, y, Task::Regression, small_config());
  const AdditiveModel moved = train_nam(affine, y, Task::Regression, small_config());
  CHECK(base.header.standardization.transform(X) == twice.header.standardization.transform(doubled));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double p = predict(base, X.row(i).transpose());
    CHECK(p == predict(twice, doubled.row(i).transpose()));
    CHECK(std::abs(p - predict(moved, affine.row(i).transpose())) < 1e-6);
  }

  const LinearModel lin = train_linear(X, y, Task::Regression, {.l2 = 1e-3, .standardize = true});
  const LinearModel lin2 = train_linear(doubled, y, Task::Regression, {.l2 = 1e-3, .standardize = true});
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    CHECK(predict(lin, X.row(i).transpose()) == predict(lin2, doubled.row(i).transpose()));
  }
}

TEST_CASE("linear regression recovers noiseless coefficients") {
  Rng rng(47);
  const Eigen::MatrixXd X = random_matrix(rng, 300, 4, 2.0);
  const Eigen::Vector4d w(1.5, -2.0, 0.25, 3.0);
  const Eigen::VectorXd y = (X * w).array() + 0.7;
  const LinearModel m = train_linear(X, y, Task::Regression);
  CHECK((m.weights - w).cwiseAbs().maxCoeff() < 1e-4);
  CHECK(std::abs(m.bias - 0.7) < 1e-4);

  Eigen::MatrixXd dup(50, 2);
  dup.col(0) = random_vector(rng, 50);
  dup.col(1) = dup.col(0);
  CHECK(error_code_of([&] { train_linear(dup, random_vector(rng, 50), Task::Regression); }) ==
        ErrorCode::SingularSystem);
  CHECK_NOTHROW(train_linear(dup, random_vector(rng, 50), Task::Regression, {.l2 = 0.1}));
}

TEST_CASE("logistic regression separates separable data") {
  Rng rng(48);
  const Eigen::MatrixXd X = random_matrix(rng, 400, 3);
  Eigen::VectorXd y(400);
  for (Eigen::Index i = 0; i < 400; ++i) y(i) = X(i, 0) - 0.5 * X(i, 2) > 0 ? 1.0 : 0.0;
  const LinearModel m = train_linear(X, y, Task::Binary);
  Eigen::VectorXd p(400);
  for (Eigen::Index i = 0; i < 400; ++i) p(i) = predict(m, X.row(i).transpose());
  CHECK(auc(as_span(p), as_span(y)) >= 0.99);
  CHECK(error_code_of([&] { train_linear(X, Eigen::VectorXd::Constant(400, 2.0), Task::Binary); }) ==
        ErrorCode::InvalidArgument);
  CHECK(error_code_of([&] { predict(m, Eigen::VectorXd(2)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("parameter layout") {
  TrainingConfig config;
  const AdditiveModel model = init_additive_model(3, Task::Regression, config);
  const Eigen::Index per_net = (64 + 64) + (32 * 64 + 32) + (32 + 1);
  CHECK(model.subnets[0].parameter_count() == per_net);
  const Eigen::VectorXd p = flatten_parameters(model);
  CHECK(p.size() == 3 * per_net + 1);
  // Weight of the first layer comes first, column-major.
  CHECK(p(0) == model.subnets[0].layers[0].weight(0, 0));
  CHECK(p(1) == model.subnets[0].layers[0].weight(1, 0));
  AdditiveModel copy = model;
  assign_parameters(copy, p * 2.0);
  CHECK(flatten_parameters(copy) == p * 2.0);
  CHECK(error_code_of([&] { assign_parameters(copy, Eigen::VectorXd(5)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("model files round trip and reject damage") {
  Rng rng(49);
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  regression_data(rng, X, y);
  AdditiveModel nam = train_nam(X, y, Task::Regression, small_config());
  nam.header.target = "speed";
  nam.header.feature_names = {"a", "b", "c"};
  LinearModel lin = train_linear(X, y, Task::Regression, {.l2 = 1e-3, .standardize = true});
  lin.header.feature_names = {"a", "b", "c"};

  for (const Model& model : {Model(nam), Model(lin)}) {
    const std::string text = serialize_model(model);
    const Model back = parse_model(text);
    CHECK(serialize_model(back) == text);
    CHECK(header_of(back).feature_names == header_of(model).feature_names);
    for (Eigen::Index i = 0; i < 20; ++i) CHECK(predict(back, X.row(i).transpose()) == predict(model, X.row(i).transpose()));

    auto doc = nlohmann::json::parse(text);
    doc["version"] = 2;
    CHECK(error_code_of([&] { parse_model(doc.dump()); }) == ErrorCode::VersionMismatch);
    doc = nlohmann::json::parse(text);
    doc["parameters"]["feature_names"][0] = "z";
    CHECK(error_code_of([&] { parse_model(doc.dump()); }) == ErrorCode::CorruptFile);
    CHECK(error_code_of([&] { parse_model(text.substr(0, text.size() / 2)); }) == ErrorCode::CorruptFile);
  }

  auto doc = nlohmann::json::parse(serialize_model(nam));
  doc["parameters"]["subnets"][0]["layers"][1]["cols"] = 7;
  CHECK(error_code_of([&] { parse_model(doc.dump()); }) == ErrorCode::CorruptFile);

  support::TempDir dir("models");
  save_model(nam, dir / "m.json");
  CHECK(serialize_model(load_model(dir / "m.json")) == serialize_model(nam));
  CHECK(error_code_of([&] { load_model(dir / "missing.json"); }) == ErrorCode::IoError);
}

TEST_CASE("shape_function matches the subnet") {
  Rng rng(50);
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  regression_data(rng, X, y);
  const AdditiveModel model = train_nam(X, y, Task::Regression, small_config());
  const std::vector<double> grid = {-1.0, 0.0, 2.5};
  const auto curve = shape_function(model, 2, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    Eigen::VectorXd x = X.row(0).transpose();
    x(2) = grid[k];
    CHECK(curve[k].first == grid[k]);
    CHECK(std::abs(curve[k].second - contributions(model, x)(2)) < 1e-12);
  }
  CHECK(error_code_of([&] { shape_function(model, 3, grid); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("training input validation") {
  Eigen::MatrixXd X(4, 1);
  X << 1, 2, 3, 4;
  CHECK(error_code_of([&] { train_nam(X, Eigen::VectorXd(3), Task::Regression); }) == ErrorCode::DimensionMismatch);
  CHECK(error_code_of([&] { train_nam(Eigen::MatrixXd(0, 1), Eigen::VectorXd(0), Task::Regression); }) ==
        ErrorCode::EmptyDataset);
  Eigen::MatrixXd bad = X;
  bad(0, 0) = std::nan("");
  CHECK(error_code_of([&] { train_nam(bad, Eigen::VectorXd::Zero(4), Task::Regression); }) == ErrorCode::NonFinite);
  TrainingConfig config;
  config.epochs = 0;
  CHECK(error_code_of([&] { config.validate(); }) == ErrorCode::InvalidArgument);
  // A huge step diverges and is reported as numeric failure.
  TrainingConfig wild = small_config();
  wild.optimizer = Optimizer::Sgd;
  wild.learning_rate = 1e6;
  Eigen::VectorXd target(4);
  target << 1e3, -1e3, 1e3, -1e3;
  CHECK(error_code_of([&] { train_nam(X, target, Task::Regression, wild); }) == ErrorCode::NonFinite);
}
