#include "swingnam/features.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_set>

#include "swingnam/csv.hpp"

namespace swingnam {

namespace {

using M = MetricId;
using E = SwingEvent;

// Face-on table. Address carries the set-up metrics; the relative-to-Address
// hip metrics run Takeaway through Impact; lead-side balance metrics sit at
// Impact onward.
const std::vector<FeatureKey>& faceon_table() {
  static const std::vector<FeatureKey> table = {
      {M::STANCE_RATIO, E::Address},
      {M::UPPER_TILT, E::Address},
      {M::SHOULDER_ANGLE, E::Address},
      {M::LEFT_ARM_ANGLE, E::Address},
      {M::RIGHT_ARM_ANGLE, E::Address},
      {M::SHOULDER_LOC, E::Address},

      {M::HEAD_LOC, E::Takeaway},
      {M::HIP_ROTATION, E::Takeaway},
      {M::HIP_SHIFTED, E::Takeaway},
      {M::LEFT_ARM_ANGLE, E::Takeaway},

      {M::HEAD_LOC, E::Backswing},
      {M::SHOULDER_LOC, E::Backswing},
      {M::HIP_ROTATION, E::Backswing},
      {M::HIP_SHIFTED, E::Backswing},
      {M::RIGHT_LEG_ANGLE, E::Backswing},

      {M::HEAD_LOC, E::Top},
      {M::SHOULDER_ANGLE, E::Top},
      {M::HIP_ROTATION, E::Top},
      {M::HIP_SHIFTED, E::Top},
      {M::RIGHT_ARMPIT_ANGLE, E::Top},
      {M::LEFT_ARM_ANGLE, E::Top},
      {M::RIGHT_LEG_ANGLE, E::Top},

      {M::HEAD_LOC, E::Downswing},
      {M::HIP_ROTATION, E::Downswing},
      {M::HIP_SHIFTED, E::Downswing},
      {M::SHOULDER_HANGING_BACK, E::Downswing},
      {M::HIP_HANGING_BACK, E::Downswing},

      {M::HEAD_LOC, E::Impact},
      {M::SHOULDER_ANGLE, E::Impact},
      {M::HIP_ROTATION, E::Impact},
      {M::HIP_SHIFTED, E::Impact},
      {M::SHOULDER_HANGING_BACK, E::Impact},
      {M::HIP_HANGING_BACK, E::Impact},
      {M::WEIGHT_SHIFT, E::Impact},
      {M::RIGHT_ARM_ANGLE, E::Impact},
      {M::LEFT_ARM_ANGLE, E::Impact},

      {M::WEIGHT_SHIFT, E::FollowThrough},
      {M::SHOULDER_LOC, E::FollowThrough},

      {M::FINISH_ANGLE, E::Finish},
      {M::UPPER_TILT, E::Finish},
  };
  return table;
}

const std::vector<FeatureKey>& dtl_table() {
  static const std::vector<FeatureKey> table = {
      {M::SPINE_ANGLE, E::Address},
      {M::LOWER_ANGLE, E::Address},
      {M::DTL_SHOULDER_ANGLE, E::Address},
      {M::RIGHT_DISTANCE, E::Address},
      {M::LEFT_LEG_ANGLE, E::Address},

      {M::SPINE_ANGLE, E::Takeaway},
      {M::HIP_LINE, E::Takeaway},
      {M::HIP_ANGLE, E::Takeaway},
      {M::DTL_LEFT_ARM_ANGLE, E::Takeaway},

      {M::SPINE_ANGLE, E::Backswing},
      {M::HIP_ANGLE, E::Backswing},
      {M::RIGHT_DISTANCE, E::Backswing},

      {M::SPINE_ANGLE, E::Top},
      {M::HIP_ANGLE, E::Top},
      {M::DTL_RIGHT_ARM_ANGLE, E::Top},
      {M::DTL_LEFT_ARM_ANGLE, E::Top},
      {M::RIGHT_DISTANCE, E::Top},

      {M::SPINE_ANGLE, E::Downswing},
      {M::HIP_LINE, E::Downswing},
      {M::HIP_ANGLE, E::Downswing},
      {M::LOWER_ANGLE, E::Downswing},

      {M::SPINE_ANGLE, E::Impact},
      {M::HIP_LINE, E::Impact},
      {M::HIP_ANGLE, E::Impact},
      {M::LEFT_LEG_ANGLE, E::Impact},
      {M::DTL_SHOULDER_ANGLE, E::Impact},

      {M::DTL_RIGHT_ARM_ANGLE, E::FollowThrough},

      {M::SPINE_ANGLE, E::Finish},
  };
  return table;
}

}  // namespace

std::string feature_name(const FeatureKey& key) {
  return std::to_string(index_of(key.event)) + "-" + display_name(key.metric);
}

FeatureSchema::FeatureSchema(View view, std::vector<FeatureKey> entries) : view_(view), entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorCode::InvalidArgument, "feature schema must not be empty");
  std::set<std::pair<int, int>> seen;
  for (const FeatureKey& key : entries_) {
    if (view_of(key.metric) != view_) {
      throw Error(ErrorCode::InvalidArgument,
                  "metric " + std::string(to_string(key.metric)) + " does not belong to view " + std::string(to_string(view_)));
    }
    if (!seen.emplace(static_cast<int>(key.metric), ::swingnam::index_of(key.event)).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate schema entry " + feature_name(key));
    }
  }
}

std::vector<std::string> FeatureSchema::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const FeatureKey& key : entries_) out.push_back(feature_name(key));
  return out;
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (feature_name(entries_[i]) == name) return i;
  }
  return std::nullopt;
}

FeatureSchema default_schema(View view) {
  return FeatureSchema(view, view == View::FaceOn ? faceon_table() : dtl_table());
}

FeatureSchema parse_schema_json(std::string_view text, std::string_view source_name) {
  const std::string source(source_name);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedFile, source + ": " + e.what());
  }
  if (!doc.is_array() || doc.empty()) {
    throw Error(ErrorCode::SchemaViolation, source + ": schema must be a non-empty array");
  }
  std::vector<FeatureKey> keys;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::string where = source + ": [" + std::to_string(i) + "]";
    if (!item.is_object() || !item.contains("metric") || !item.contains("event") || !item["metric"].is_string() ||
        !item["event"].is_number_integer()) {
      throw Error(ErrorCode::SchemaViolation, where + ": expected {\"metric\": str, \"event\": int}");
    }
    const auto metric = parse_metric(item["metric"].get<std::string>());
    if (!metric) throw Error(ErrorCode::SchemaViolation, where + ": unknown metric '" + item["metric"].get<std::string>() + "'");
    const auto event = event_from_index(item["event"].get<int>());
    if (!event) throw Error(ErrorCode::SchemaViolation, where + ": event index outside 0..7");
    keys.push_back({*metric, *event});
  }
  const View view = view_of(keys.front().metric);
  try {
    return FeatureSchema(view, std::move(keys));
  } catch (const Error& e) {
    throw Error(ErrorCode::SchemaViolation, source + ": " + e.what());
  }
}

FeatureSchema load_schema_file(const std::filesystem::path& path) {
  return parse_schema_json(io::read_text_file(path), path.string());
}

std::string serialize_schema_json(const FeatureSchema& schema) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const FeatureKey& key : schema.entries()) {
    doc.push_back({{"metric", std::string(to_string(key.metric))}, {"event", index_of(key.event)}});
  }
  return doc.dump(1) + "\n";
}

std::string schema_fingerprint(const std::vector<std::string>& feature_names) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](unsigned char byte) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  };
  for (std::size_t i = 0; i < feature_names.size(); ++i) {
    if (i > 0) mix('\n');
    for (unsigned char ch : feature_names[i]) mix(ch);
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

FeatureVector assemble(std::span<const MetricValue> metric_values, const FeatureSchema& schema, std::string swing_id) {
  FeatureVector out{std::move(swing_id), Eigen::VectorXd(static_cast<Eigen::Index>(schema.size()))};
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const FeatureKey& key = schema.entries()[i];
    const MetricValue* found = nullptr;
    for (const MetricValue& v : metric_values) {
      if (v.metric == key.metric && v.event == key.event) {
        found = &v;
        break;
      }
    }
    if (found == nullptr) {
      throw Error(ErrorCode::MissingMetric, "no value for (" + std::string(to_string(key.metric)) + ", " +
                                                std::string(to_string(key.event)) + ")");
    }
    if (!std::isfinite(found->value)) {
      throw Error(ErrorCode::NonFinite, "non-finite value for " + feature_name(key));
    }
    out.values(static_cast<Eigen::Index>(i)) = found->value;
  }
  return out;
}

FeatureVector extract_features(const SwingSequence& raw, const FeatureSchema& schema) {
  if (raw.view != schema.view()) {
    throw Error(ErrorCode::InvalidArgument, "swing '" + raw.swing_id + "' view does not match the feature schema");
  }
  const SwingSequence normalized = normalize_sequence(raw);
  const auto values = compute_all(normalized);
  return assemble(values, schema, raw.swing_id);
}

FeatureTable make_feature_table(const std::vector<FeatureVector>& vectors, std::vector<std::string> feature_names) {
  FeatureTable table;
  table.feature_names = std::move(feature_names);
  const auto cols = static_cast<Eigen::Index>(table.feature_names.size());
  table.values.resize(static_cast<Eigen::Index>(vectors.size()), cols);
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    if (vectors[r].values.size() != cols) {
      throw Error(ErrorCode::DimensionMismatch, "feature vector '" + vectors[r].swing_id + "' has wrong length");
    }
    table.swing_ids.push_back(vectors[r].swing_id);
    table.values.row(static_cast<Eigen::Index>(r)) = vectors[r].values.transpose();
  }
  return table;
}

std::string serialize_feature_csv(const FeatureTable& table) {
  std::string out = "swing_id";
  for (const auto& name : table.feature_names) out += "," + io::quote_csv_field(name);
  out += '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    out += io::quote_csv_field(table.swing_ids[r]);
    for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
      out += "," + io::format_real(table.values(static_cast<Eigen::Index>(r), c));
    }
    out += '\n';
  }
  return out;
}

FeatureTable parse_feature_csv_text(std::string_view text, std::string_view source_name) {
  const std::string source(source_name);
  const auto records = io::csv_records(text);
  if (records.empty()) throw Error(ErrorCode::MalformedFile, source + ": missing header row");
  auto header = io::split_csv_line(records.front().second);
  if (header.empty() || header.front() != "swing_id") {
    throw Error(ErrorCode::MalformedFile, source + ": first column must be swing_id");
  }
  FeatureTable table;
  table.feature_names.assign(header.begin() + 1, header.end());
  const auto cols = static_cast<Eigen::Index>(table.feature_names.size());
  table.values.resize(static_cast<Eigen::Index>(records.size() - 1), cols);
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& [line_no, line] = records[r];
    const std::string where = source + ":" + std::to_string(line_no);
    const auto fields = io::split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::MalformedFile, where + ": expected " + std::to_string(header.size()) + " fields");
    }
    if (!seen.insert(fields[0]).second) throw Error(ErrorCode::DuplicateSwingId, where + ": repeated swing id '" + fields[0] + "'");
    table.swing_ids.push_back(fields[0]);
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto value = io::parse_real(fields[static_cast<std::size_t>(c) + 1]);
      if (!value || !std::isfinite(*value)) {
        throw Error(ErrorCode::MalformedFile, where + ": column '" + table.feature_names[static_cast<std::size_t>(c)] + "' is not a finite number");
      }
      table.values(static_cast<Eigen::Index>(r - 1), c) = *value;
    }
  }
  return table;
}

FeatureTable read_feature_csv(const std::filesystem::path& path) {
  return parse_feature_csv_text(io::read_text_file(path), path.string());
}

void write_feature_csv(const std::filesystem::path& path, const FeatureTable& table) {
  io::write_text_file(path, serialize_feature_csv(table));
}

void LabelPolicy::validate() const {
  if (!(direction_threshold > 0.0) || !(spin_threshold > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "label thresholds must be positive");
  }
}

Straightness label_direction(double direction_angle, const LabelPolicy& policy) {
  return std::abs(direction_angle) <= policy.direction_threshold ? Straightness::Straight : Straightness::NonStraight;
}

Straightness label_spin(double spin_axis, const LabelPolicy& policy) {
  return std::abs(spin_axis) <= policy.spin_threshold ? Straightness::Straight : Straightness::NonStraight;
}

ShotShape shot_shape(const BallRecord& ball, const LabelPolicy& policy) {
  ShotShape shape{StartDirection::Straight, Curvature::Straight};
  if (ball.direction_angle < -policy.direction_threshold) shape.start = StartDirection::Pull;
  if (ball.direction_angle > policy.direction_threshold) shape.start = StartDirection::Push;
  // Negative spin axis (clockwise tilt) curves the ball left.
  if (ball.spin_axis < -policy.spin_threshold) shape.curve = Curvature::Hook;
  if (ball.spin_axis > policy.spin_threshold) shape.curve = Curvature::Slice;
  return shape;
}

std::string_view to_string(Target target) {
  switch (target) {
    case Target::Direction: return "direction";
    case Target::Spin: return "spin";
    default: return "speed";
  }
}

std::optional<Target> parse_target(std::string_view text) {
  for (Target t : kAllTargets) {
    if (to_string(t) == text) return t;
  }
  return std::nullopt;
}

bool is_binary(Target target) { return target != Target::Speed; }

Eigen::VectorXd target_values(std::span<const BallRecord> balls, Target target, const LabelPolicy& policy) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(balls.size()));
  for (std::size_t i = 0; i < balls.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    switch (target) {
      case Target::Direction:
        y(r) = label_direction(balls[i].direction_angle, policy) == Straightness::Straight ? 1.0 : 0.0;
        break;
      case Target::Spin:
        y(r) = label_spin(balls[i].spin_axis, policy) == Straightness::Straight ? 1.0 : 0.0;
        break;
      case Target::Speed:
        y(r) = balls[i].ball_speed;
        break;
    }
  }
  return y;
}

std::string_view to_string(StartDirection start) {
  switch (start) {
    case StartDirection::Pull: return "pull";
    case StartDirection::Push: return "push";
    default: return "straight";
  }
}

std::string_view to_string(Curvature curve) {
  switch (curve) {
    case Curvature::Hook: return "hook";
    case Curvature::Slice: return "slice";
    default: return "straight";
  }
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& train) {
  if (train.rows() < 2) throw Error(ErrorCode::EmptyDataset, "standardization needs at least 2 training rows");
  Standardizer s;
  const auto d = train.cols();
  const double n = static_cast<double>(train.rows());
  s.mean = train.colwise().sum().transpose() / n;
  s.scale.resize(d);
  s.constant.assign(static_cast<std::size_t>(d), false);
  for (Eigen::Index c = 0; c < d; ++c) {
    const double var = (train.col(c).array() - s.mean(c)).square().sum() / n;
    const double sd = std::sqrt(var);
    if (sd > 0.0) {
      s.scale(c) = sd;
    } else {
      s.scale(c) = 1.0;
      s.constant[static_cast<std::size_t>(c)] = true;
    }
  }
  return s;
}

Standardizer Standardizer::identity(Eigen::Index dims) {
  Standardizer s;
  s.mean = Eigen::VectorXd::Zero(dims);
  s.scale = Eigen::VectorXd::Ones(dims);
  s.constant.assign(static_cast<std::size_t>(dims), true);
  return s;
}

double Standardizer::transform(Eigen::Index column, double raw) const {
  if (constant[static_cast<std::size_t>(column)]) return raw;
  return (raw - mean(column)) / scale(column);
}

double Standardizer::inverse(Eigen::Index column, double standardized) const {
  if (constant[static_cast<std::size_t>(column)]) return standardized;
  return standardized * scale(column) + mean(column);
}

Eigen::VectorXd Standardizer::transform(const Eigen::VectorXd& raw) const {
  if (raw.size() != dims()) throw Error(ErrorCode::DimensionMismatch, "vector length does not match standardizer");
  Eigen::VectorXd out(raw.size());
  for (Eigen::Index c = 0; c < raw.size(); ++c) out(c) = transform(c, raw(c));
  return out;
}

Eigen::MatrixXd Standardizer::transform(const Eigen::MatrixXd& raw) const {
  if (raw.cols() != dims()) throw Error(ErrorCode::DimensionMismatch, "matrix width does not match standardizer");
  Eigen::MatrixXd out(raw.rows(), raw.cols());
  for (Eigen::Index c = 0; c < raw.cols(); ++c) {
    for (Eigen::Index r = 0; r < raw.rows(); ++r) out(r, c) = transform(c, raw(r, c));
  }
  return out;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::LengthMismatch, "pearson inputs differ in length");
  if (xs.size() < 2) throw Error(ErrorCode::EmptyDataset, "pearson needs at least 2 pairs");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw Error(ErrorCode::ZeroVariance, "pearson input has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
  return pearson(std::span<const double>(xs.data(), static_cast<std::size_t>(xs.size())),
                 std::span<const double>(ys.data(), static_cast<std::size_t>(ys.size())));
}

}  // namespace swingnam
