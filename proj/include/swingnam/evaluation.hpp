#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swingnam/features.hpp"
#include "swingnam/models.hpp"
#include "swingnam/pose_io.hpp"

namespace swingnam {

// ---- scoring --------------------------------------------------------------

// Fraction of rows where (p >= 0.5) agrees with the 0/1 label.
double accuracy(std::span<const double> probabilities, std::span<const double> labels);
// Mann-Whitney AUC: P(score_pos > score_neg) with ties counted as one half.
double auc(std::span<const double> scores, std::span<const double> labels);
double mse(std::span<const double> predictions, std::span<const double> targets);

inline std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// ---- benchmark --------------------------------------------------------------

struct EvalReport {
  Target task = Target::Direction;
  std::string model;
  std::optional<double> accuracy;
  std::optional<double> auc;
  std::optional<double> mse;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::uint64_t seed = 0;

  bool operator==(const EvalReport&) const = default;
};

struct SkippedRun {
  Target task = Target::Direction;
  std::string model;
  std::string reason;
};

struct BenchmarkResult {
  std::vector<EvalReport> reports;
  std::vector<SkippedRun> skipped;
};

// Feature rows aligned with their ball records.
struct LabeledDataset {
  FeatureTable features;
  std::vector<BallRecord> balls;
};

// Inner join on swing_id; rows keep the feature table's order.
LabeledDataset join_features(const FeatureTable& features, const std::vector<BallRecord>& balls,
                             std::vector<std::string>* unmatched = nullptr);
LabeledDataset labeled_from_shots(const std::vector<PairedShot>& shots, const FeatureSchema& schema);

struct BenchmarkConfig {
  double train_fraction = 0.8;
  std::uint64_t seed = 42;
  LabelPolicy policy;
  LinearConfig linear{.l2 = 1e-4, .learning_rate = 0.5, .epochs = 2000, .standardize = true};
  TrainingConfig nam;
};

// Sort rows by swing_id, split once under `seed`, then train LR and NAM on
// the training part for each of the three targets and score on the test part.
// Reports come out in (direction, spin, speed) x (LR, NAM) order. A target
// whose train or test labels hold a single class is skipped with a reason.
BenchmarkResult benchmark(const LabeledDataset& data, const BenchmarkConfig& config = {});
BenchmarkResult benchmark(const std::vector<PairedShot>& shots, const FeatureSchema& schema,
                          const BenchmarkConfig& config = {});

std::string benchmark_json(const BenchmarkResult& result);
std::string benchmark_table(const BenchmarkResult& result);

// ---- correlation --------------------------------------------------------------

enum class BallField : std::uint8_t { Distance, Carry, LrDistanceOut, DirectionAngle, SpinAxis, BallSpeed };
std::string_view to_string(BallField field);
std::optional<BallField> parse_ball_field(std::string_view text);
double ball_field(const BallRecord& ball, BallField field);

struct FeatureCorrelation {
  std::string feature;
  // Empty when either column has zero variance.
  std::optional<double> r;
};

std::vector<FeatureCorrelation> correlation_table(const LabeledDataset& data, BallField field);

// ---- synthetic data -------------------------------------------------------

enum class ShapeKind : std::uint8_t { Linear, Quadratic, Sine, StepSmooth, Zero };
std::string_view to_string(ShapeKind kind);

// One planted additive term g(x) with x drawn uniform on [lo, hi].
struct GroundTruthTerm {
  ShapeKind kind = ShapeKind::Linear;
  double lo = -1.0;
  double hi = 1.0;
  double scale = 1.0;
  // Location of the peak / step / zero crossing.
  double center = 0.0;

  double operator()(double x) const;
};

struct SyntheticSpec {
  std::vector<GroundTruthTerm> terms;
  double bias = 0.0;
  double noise_std = 0.0;
};

struct SyntheticDataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;           // noiseless sum + bias + gaussian noise
  Eigen::VectorXd noiseless;   // sum of g_i(x_i) + bias
  Eigen::VectorXd labels;      // 1 where noiseless > threshold
  double threshold = 0.0;      // median of the noiseless sums
  SyntheticSpec truth;
};

SyntheticDataset generate_synthetic(std::uint64_t seed, std::size_t n, const SyntheticSpec& spec);

// Plausible right-handed swings with launch-monitor records whose outcomes
// are planted functions of a few swing features (2-HEAD-LOC drives
// direction, 5-SHOULDER-ANGLE drives spin, 0-STANCE-RATIO and 0-UPPER-TILT
// drive ball speed).
struct SyntheticSwingConfig {
  std::size_t swings = 200;
  std::size_t golfers = 10;
  View view = View::FaceOn;
  double outcome_noise = 1.0;
};

struct SyntheticSwingSet {
  std::vector<SwingSequence> sequences;
  std::vector<BallRecord> balls;
};

SyntheticSwingSet generate_synthetic_swings(std::uint64_t seed, const SyntheticSwingConfig& config = {});

}  // namespace swingnam
