#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swingnam/metrics.hpp"
#include "swingnam/pose_io.hpp"

namespace swingnam {

struct FeatureKey {
  MetricId metric;
  SwingEvent event;

  bool operator==(const FeatureKey&) const = default;
};

// "<event index>-<METRIC-NAME>", e.g. "2-HEAD-LOC".
std::string feature_name(const FeatureKey& key);

class FeatureSchema {
 public:
  FeatureSchema(View view, std::vector<FeatureKey> entries);

  View view() const { return view_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<FeatureKey>& entries() const { return entries_; }
  std::vector<std::string> names() const;
  // Position of `name` in the schema, if present.
  std::optional<std::size_t> index_of(std::string_view name) const;

 private:
  View view_;
  std::vector<FeatureKey> entries_;
};

// Default face-on table has 40 entries; the DTL table 28.
FeatureSchema default_schema(View view);

// Schema config: JSON array of {"metric": "HEAD_LOC" | "HEAD-LOC", "event": 0..7}.
FeatureSchema parse_schema_json(std::string_view text, std::string_view source_name = "<memory>");
FeatureSchema load_schema_file(const std::filesystem::path& path);
std::string serialize_schema_json(const FeatureSchema& schema);

// 64-bit FNV-1a over the newline-joined feature names, as 16 hex digits.
std::string schema_fingerprint(const std::vector<std::string>& feature_names);

struct FeatureVector {
  std::string swing_id;
  Eigen::VectorXd values;
};

FeatureVector assemble(std::span<const MetricValue> metric_values, const FeatureSchema& schema,
                       std::string swing_id = {});

// Normalize, compute every metric and assemble against `schema`.
FeatureVector extract_features(const SwingSequence& raw, const FeatureSchema& schema);

// Rows are swings, columns follow `feature_names`.
struct FeatureTable {
  std::vector<std::string> feature_names;
  std::vector<std::string> swing_ids;
  Eigen::MatrixXd values;

  std::size_t rows() const { return swing_ids.size(); }
  std::size_t cols() const { return feature_names.size(); }
};

FeatureTable make_feature_table(const std::vector<FeatureVector>& vectors, std::vector<std::string> feature_names);
// CSV header: swing_id,<feature names...>
std::string serialize_feature_csv(const FeatureTable& table);
FeatureTable parse_feature_csv_text(std::string_view text, std::string_view source_name = "<memory>");
FeatureTable read_feature_csv(const std::filesystem::path& path);
void write_feature_csv(const std::filesystem::path& path, const FeatureTable& table);

// ---- labels -------------------------------------------------------------

struct LabelPolicy {
  double direction_threshold = 6.0;
  double spin_threshold = 10.0;

  void validate() const;
};

enum class Straightness : std::uint8_t { Straight, NonStraight };

// |value| <= threshold is straight (inclusive).
Straightness label_direction(double direction_angle, const LabelPolicy& policy = {});
Straightness label_spin(double spin_axis, const LabelPolicy& policy = {});

enum class StartDirection : std::uint8_t { Pull, Straight, Push };
enum class Curvature : std::uint8_t { Hook, Straight, Slice };

struct ShotShape {
  StartDirection start;
  Curvature curve;

  bool operator==(const ShotShape&) const = default;
};

ShotShape shot_shape(const BallRecord& ball, const LabelPolicy& policy = {});

// Ball-flight quantity a model predicts. Direction and spin are binary
// (1 = straight); speed is a regression target.
enum class Target : std::uint8_t { Direction, Spin, Speed };
inline constexpr std::array<Target, 3> kAllTargets = {Target::Direction, Target::Spin, Target::Speed};
std::string_view to_string(Target target);
std::optional<Target> parse_target(std::string_view text);
bool is_binary(Target target);
// Per-ball target values in `balls` order.
Eigen::VectorXd target_values(std::span<const BallRecord> balls, Target target, const LabelPolicy& policy = {});
std::string_view to_string(StartDirection start);
std::string_view to_string(Curvature curve);

// ---- standardization ------------------------------------------------------

// Per-column z-scoring with the population (1/N) standard deviation. Columns
// with zero spread are flagged and passed through unchanged.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
  std::vector<bool> constant;

  static Standardizer fit(const Eigen::MatrixXd& train);
  static Standardizer identity(Eigen::Index dims);

  Eigen::Index dims() const { return mean.size(); }
  double transform(Eigen::Index column, double raw) const;
  double inverse(Eigen::Index column, double standardized) const;
  Eigen::VectorXd transform(const Eigen::VectorXd& raw) const;
  Eigen::MatrixXd transform(const Eigen::MatrixXd& raw) const;

  bool operator==(const Standardizer&) const = default;
};

// Pearson product-moment correlation.
double pearson(std::span<const double> xs, std::span<const double> ys);
double pearson(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys);

}  // namespace swingnam
