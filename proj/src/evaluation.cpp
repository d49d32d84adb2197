#include "swingnam/evaluation.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>

namespace swingnam {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, std::string(what) + ": inputs differ in length");
  if (a.empty()) throw Error(ErrorCode::EmptyDataset, std::string(what) + ": no inputs");
}

void check_labels(std::span<const double> labels) {
  for (double l : labels) {
    if (l != 0.0 && l != 1.0) throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
  }
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

Eigen::VectorXd select_rows(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(rows[i]);
  return out;
}

bool single_class(const Eigen::VectorXd& labels) {
  return labels.size() == 0 || labels.minCoeff() == labels.maxCoeff();
}

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

double accuracy(std::span<const double> probabilities, std::span<const double> labels) {
  check_pair(probabilities, labels, "accuracy");
  check_labels(labels);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double predicted = probabilities[i] >= 0.5 ? 1.0 : 0.0;
    if (predicted == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

double auc(std::span<const double> scores, std::span<const double> labels) {
  check_pair(scores, labels, "auc");
  check_labels(labels);
  for (double s : scores) {
    if (std::isnan(s)) throw Error(ErrorCode::NonFinite, "auc: NaN score");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the Mann-Whitney U statistic, kept integral so ties are exact.
  unsigned long long twice_u = 0, positives = 0, negatives = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    unsigned long long pos_group = 0, neg_group = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1.0 ? pos_group : neg_group) += 1;
      ++j;
    }
    twice_u += pos_group * (2 * negatives + neg_group);
    positives += pos_group;
    negatives += neg_group;
    i = j;
  }
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::DegenerateLabels, "auc needs at least one positive and one negative label");
  }
  return static_cast<double>(twice_u) / (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

double mse(std::span<const double> predictions, std::span<const double> targets) {
  check_pair(predictions, targets, "mse");
  double total = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double r = predictions[i] - targets[i];
    total += r * r;
  }
  return total / static_cast<double>(targets.size());
}

LabeledDataset join_features(const FeatureTable& features, const std::vector<BallRecord>& balls,
                             std::vector<std::string>* unmatched) {
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < balls.size(); ++i) by_id.emplace(balls[i].swing_id, i);

  std::vector<Eigen::Index> kept;
  LabeledDataset out;
  out.features.feature_names = features.feature_names;
  for (std::size_t r = 0; r < features.rows(); ++r) {
    const auto it = by_id.find(features.swing_ids[r]);
    if (it == by_id.end()) {
      if (unmatched) unmatched->push_back(features.swing_ids[r]);
      continue;
    }
    kept.push_back(static_cast<Eigen::Index>(r));
    out.features.swing_ids.push_back(features.swing_ids[r]);
    out.balls.push_back(balls[it->second]);
  }
  out.features.values = select_rows(features.values, kept);
  return out;
}

LabeledDataset labeled_from_shots(const std::vector<PairedShot>& shots, const FeatureSchema& schema) {
  std::vector<FeatureVector> vectors;
  LabeledDataset out;
  for (const PairedShot& shot : shots) {
    vectors.push_back(extract_features(shot.sequence, schema));
    out.balls.push_back(shot.ball);
  }
  out.features = make_feature_table(vectors, schema.names());
  return out;
}

BenchmarkResult benchmark(const LabeledDataset& data, const BenchmarkConfig& config) {
  const std::size_t n = data.features.rows();
  if (n < 10) throw Error(ErrorCode::EmptyDataset, "benchmark needs at least 10 shots, got " + std::to_string(n));
  if (data.balls.size() != n) throw Error(ErrorCode::LengthMismatch, "feature rows and ball records differ in count");
  config.policy.validate();

  // Canonical order so split membership depends only on ids and seed.
  std::vector<Eigen::Index> canonical(n);
  std::iota(canonical.begin(), canonical.end(), Eigen::Index{0});
  std::sort(canonical.begin(), canonical.end(), [&](Eigen::Index a, Eigen::Index b) {
    return data.features.swing_ids[static_cast<std::size_t>(a)] < data.features.swing_ids[static_cast<std::size_t>(b)];
  });
  auto [train_rows, test_rows] = split_dataset(canonical, config.train_fraction, config.seed);

  const Eigen::MatrixXd X_train = select_rows(data.features.values, train_rows);
  const Eigen::MatrixXd X_test = select_rows(data.features.values, test_rows);

  BenchmarkResult result;
  for (Target target : kAllTargets) {
    const Eigen::VectorXd y_all = target_values(data.balls, target, config.policy);
    const Eigen::VectorXd y_train = select_rows(y_all, train_rows);
    const Eigen::VectorXd y_test = select_rows(y_all, test_rows);
    const Task task = task_for(target);

    if (task == Task::Binary && (single_class(y_train) || single_class(y_test))) {
      const std::string reason = std::string(to_string(ErrorCode::DegenerateLabels)) + ": " +
                                 (single_class(y_train) ? "training" : "test") + " labels hold a single class";
      result.skipped.push_back({target, "LR", reason});
      result.skipped.push_back({target, "NAM", reason});
      continue;
    }

    for (const char* name : {"LR", "NAM"}) {
      Model model = [&]() -> Model {
        if (std::string_view(name) == "LR") return train_linear(X_train, y_train, task, config.linear);
        TrainingConfig nam = config.nam;
        nam.seed = config.seed;
        return train_nam(X_train, y_train, task, nam);
      }();
      const Eigen::VectorXd predictions = predict_rows(model, X_test);
      EvalReport report;
      report.task = target;
      report.model = name;
      report.n_train = train_rows.size();
      report.n_test = test_rows.size();
      report.seed = config.seed;
      if (task == Task::Binary) {
        report.accuracy = accuracy(as_span(predictions), as_span(y_test));
        report.auc = auc(as_span(predictions), as_span(y_test));
      } else {
        report.mse = mse(as_span(predictions), as_span(y_test));
      }
      result.reports.push_back(std::move(report));
    }
  }
  return result;
}

BenchmarkResult benchmark(const std::vector<PairedShot>& shots, const FeatureSchema& schema, const BenchmarkConfig& config) {
  return benchmark(labeled_from_shots(shots, schema), config);
}

std::string benchmark_json(const BenchmarkResult& result) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  for (const EvalReport& r : result.reports) {
    nlohmann::ordered_json j;
    j["task"] = std::string(to_string(r.task));
    j["model"] = r.model;
    j["accuracy"] = optional_json(r.accuracy);
    j["auc"] = optional_json(r.auc);
    j["mse"] = optional_json(r.mse);
    j["n_train"] = r.n_train;
    j["n_test"] = r.n_test;
    j["seed"] = r.seed;
    reports.push_back(std::move(j));
  }
  nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
  for (const SkippedRun& s : result.skipped) {
    skipped.push_back({{"task", std::string(to_string(s.task))}, {"model", s.model}, {"reason", s.reason}});
  }
  doc["reports"] = std::move(reports);
  doc["skipped"] = std::move(skipped);
  return doc.dump(2) + "\n";
}

std::string benchmark_table(const BenchmarkResult& result) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-10s %-6s %9s %9s %10s %8s %7s\n", "task", "model", "acc", "auc", "mse", "n_train",
                "n_test");
  out += line;
  auto cell = [](const std::optional<double>& v, const char* fmt) {
    char buf[32];
    if (!v) return std::string("-");
    std::snprintf(buf, sizeof(buf), fmt, *v);
    return std::string(buf);
  };
  for (const EvalReport& r : result.reports) {
    std::snprintf(line, sizeof(line), "%-10s %-6s %9s %9s %10s %8zu %7zu\n", std::string(to_string(r.task)).c_str(),
                  r.model.c_str(), cell(r.accuracy, "%.4f").c_str(), cell(r.auc, "%.4f").c_str(),
                  cell(r.mse, "%.4f").c_str(), r.n_train, r.n_test);
    out += line;
  }
  for (const SkippedRun& s : result.skipped) {
    out += "skipped " + std::string(to_string(s.task)) + "/" + s.model + ": " + s.reason + "\n";
  }
  return out;
}

std::string_view to_string(BallField field) {
  switch (field) {
    case BallField::Distance: return "distance";
    case BallField::Carry: return "carry";
    case BallField::LrDistanceOut: return "lr_distance_out";
    case BallField::DirectionAngle: return "direction_angle";
    case BallField::SpinAxis: return "spin_axis";
    case BallField::BallSpeed: return "ball_speed";
  }
  return "ball_speed";
}

std::optional<BallField> parse_ball_field(std::string_view text) {
  for (BallField f : {BallField::Distance, BallField::Carry, BallField::LrDistanceOut, BallField::DirectionAngle,
                      BallField::SpinAxis, BallField::BallSpeed}) {
    if (to_string(f) == text) return f;
  }
  return std::nullopt;
}

double ball_field(const BallRecord& ball, BallField field) {
  switch (field) {
    case BallField::Distance: return ball.distance;
    case BallField::Carry: return ball.carry;
    case BallField::LrDistanceOut: return ball.lr_distance_out;
    case BallField::DirectionAngle: return ball.direction_angle;
    case BallField::SpinAxis: return ball.spin_axis;
    case BallField::BallSpeed: return ball.ball_speed;
  }
  return ball.ball_speed;
}

std::vector<FeatureCorrelation> correlation_table(const LabeledDataset& data, BallField field) {
  const std::size_t n = data.features.rows();
  if (n < 2) throw Error(ErrorCode::EmptyDataset, "correlation needs at least 2 rows");
  if (data.balls.size() != n) throw Error(ErrorCode::LengthMismatch, "feature rows and ball records differ in count");
  Eigen::VectorXd target(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) target(static_cast<Eigen::Index>(i)) = ball_field(data.balls[i], field);

  std::vector<FeatureCorrelation> out;
  for (std::size_t c = 0; c < data.features.cols(); ++c) {
    const Eigen::VectorXd column = data.features.values.col(static_cast<Eigen::Index>(c));
    FeatureCorrelation entry{data.features.feature_names[c], std::nullopt};
    try {
      entry.r = pearson(column, target);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroVariance) throw;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace swingnam
