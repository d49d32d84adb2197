#include "swingnam/feedback.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "swingnam/csv.hpp"

namespace swingnam {

std::size_t DensityHistogram::bin_of(double x) const {
  if (counts.empty()) throw Error(ErrorCode::InvalidArgument, "histogram has no bins");
  const auto it = std::upper_bound(edges.begin(), edges.end(), x);
  const auto idx = static_cast<std::ptrdiff_t>(it - edges.begin()) - 1;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(counts.size()) - 1));
}

std::size_t DensityHistogram::mode_bin() const {
  return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

DensityHistogram make_histogram(const Eigen::VectorXd& values, double lo, double hi, std::size_t bins) {
  if (bins == 0) throw Error(ErrorCode::InvalidArgument, "histogram needs at least one bin");
  if (!(hi > lo)) throw Error(ErrorCode::InvalidArgument, "histogram range must satisfy lo < hi");
  DensityHistogram h;
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    h.edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  }
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  h.total = static_cast<std::size_t>(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values(i);
    if (v < lo || v > hi) continue;
    ++h.counts[h.bin_of(v)];
  }
  return h;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::EmptyDataset, "percentile of an empty sample");
  if (!(q >= 0.0 && q <= 100.0)) throw Error(ErrorCode::InvalidArgument, "percentile must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ShapeCurve extract_curve(const AdditiveModel& model, std::size_t feature, const Eigen::VectorXd& train_column,
                         const CurveConfig& config) {
  if (train_column.size() == 0) throw Error(ErrorCode::EmptyDataset, "no training rows for shape curves");
  if (config.grid_size < 2) throw Error(ErrorCode::InvalidArgument, "grid size must be at least 2");
  if (feature >= model.subnets.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "feature index " + std::to_string(feature) + " out of range");
  }
  const std::vector<double> column(train_column.data(), train_column.data() + train_column.size());
  double lo = percentile(column, config.lower_percentile);
  double hi = percentile(column, config.upper_percentile);
  if (!(hi > lo)) {
    // Constant column: open a small window around the value.
    const double pad = 0.5 * std::max(1e-3, 0.1 * std::abs(lo));
    lo -= pad;
    hi += pad;
  }

  ShapeCurve curve;
  curve.feature = feature < model.header.feature_names.size() ? model.header.feature_names[feature]
                                                              : "x" + std::to_string(feature);
  curve.xs.resize(config.grid_size);
  for (std::size_t i = 0; i < config.grid_size; ++i) {
    curve.xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(config.grid_size - 1);
  }
  curve.xs.back() = hi;
  for (const auto& [x, y] : shape_function(model, feature, curve.xs)) curve.ys.push_back(y);
  curve.density = make_histogram(train_column, lo, hi, config.bins);
  return curve;
}

std::vector<ShapeCurve> extract_curves(const AdditiveModel& model, const Eigen::MatrixXd& train,
                                       const CurveConfig& config) {
  if (train.rows() == 0) throw Error(ErrorCode::EmptyDataset, "no training rows for shape curves");
  if (static_cast<std::size_t>(train.cols()) != model.subnets.size()) {
    throw Error(ErrorCode::DimensionMismatch, "training matrix has " + std::to_string(train.cols()) +
                                                  " columns but the model has " +
                                                  std::to_string(model.subnets.size()) + " features");
  }
  std::vector<ShapeCurve> curves;
  curves.reserve(model.subnets.size());
  for (std::size_t j = 0; j < model.subnets.size(); ++j) {
    curves.push_back(extract_curve(model, j, train.col(static_cast<Eigen::Index>(j)), config));
  }
  return curves;
}

Objective objective_for(Target target) {
  return is_binary(target) ? Objective::MaximizeStraightLogit : Objective::MaximizeOutput;
}

std::string_view to_string(Objective objective) {
  return objective == Objective::MaximizeStraightLogit ? "maximize_straight_logit" : "maximize_output";
}

std::size_t default_density_floor(std::size_t train_rows) {
  return std::max<std::size_t>(1, (train_rows + 99) / 100);
}

double optimal_value(const ShapeCurve& curve, Objective, std::size_t floor) {
  if (curve.xs.empty() || curve.xs.size() != curve.ys.size()) {
    throw Error(ErrorCode::InvalidArgument, "curve '" + curve.feature + "' is empty or ragged");
  }
  const double mode = curve.density.bin_center(curve.density.mode_bin());
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < curve.xs.size(); ++i) {
    if (curve.density.count_at(curve.xs[i]) < floor) continue;
    if (!best) {
      best = i;
      continue;
    }
    const double y = curve.ys[i], y_best = curve.ys[*best];
    // xs are increasing, so an exact distance tie keeps the earlier (smaller) x.
    if (y > y_best || (y == y_best && std::abs(curve.xs[i] - mode) < std::abs(curve.xs[*best] - mode))) best = i;
  }
  if (!best) {
    throw Error(ErrorCode::NoFeasibleRegion, "curve '" + curve.feature + "': no grid point has a density bin count >= " +
                                                 std::to_string(floor));
  }
  return curve.xs[*best];
}

std::string FeedbackItem::advice() const {
  char buf[256];
  if (optimal == current) {
    std::snprintf(buf, sizeof(buf), "keep %s at %.4g", feature.c_str(), current);
  } else {
    std::snprintf(buf, sizeof(buf), "%s %s from %.4g toward %.4g", optimal > current ? "increase" : "decrease",
                  feature.c_str(), current, optimal);
  }
  return buf;
}

FeedbackReport generate_feedback(const AdditiveModel& model, const std::vector<ShapeCurve>& curves,
                                 const Eigen::MatrixXd& golfer_rows, Target target, const std::string& golfer_id,
                                 const FeedbackConfig& config) {
  if (golfer_rows.rows() == 0) throw Error(ErrorCode::EmptyDataset, "golfer '" + golfer_id + "' has no swings");
  const std::size_t d = model.subnets.size();
  if (static_cast<std::size_t>(golfer_rows.cols()) != d || curves.size() != d) {
    throw Error(ErrorCode::DimensionMismatch, "model has " + std::to_string(d) + " features, golfer rows have " +
                                                  std::to_string(golfer_rows.cols()) + ", curves " +
                                                  std::to_string(curves.size()));
  }
  if (config.k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");

  const Eigen::VectorXd current = golfer_rows.colwise().mean().transpose();
  const Objective objective = objective_for(target);
  std::vector<FeedbackItem> items;
  items.reserve(d);
  for (std::size_t j = 0; j < d; ++j) {
    const ShapeCurve& curve = curves[j];
    const std::size_t floor = config.density_floor.value_or(default_density_floor(curve.density.total));
    FeedbackItem item;
    item.feature = curve.feature;
    item.current = current(static_cast<Eigen::Index>(j));
    item.optimal = optimal_value(curve, objective, floor);
    const std::array<double, 2> points = {item.optimal, item.current};
    const auto f = shape_function(model, j, points);
    item.effect_delta = f[0].second - f[1].second;
    items.push_back(std::move(item));
  }
  std::stable_sort(items.begin(), items.end(), [](const FeedbackItem& a, const FeedbackItem& b) {
    const double ma = std::abs(a.effect_delta), mb = std::abs(b.effect_delta);
    if (ma != mb) return ma > mb;
    return a.feature < b.feature;
  });
  items.resize(std::min(config.k, d));
  for (std::size_t r = 0; r < items.size(); ++r) items[r].rank = r + 1;

  FeedbackReport report;
  report.golfer_id = golfer_id;
  report.target = target;
  report.items = std::move(items);
  report.n_swings = static_cast<std::size_t>(golfer_rows.rows());
  return report;
}

std::string feedback_json(const FeedbackReport& report) {
  nlohmann::ordered_json doc;
  doc["golfer_id"] = report.golfer_id;
  doc["target"] = std::string(to_string(report.target));
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  for (const FeedbackItem& item : report.items) {
    items.push_back({{"feature", item.feature},
                     {"current", item.current},
                     {"optimal", item.optimal},
                     {"effect_delta", item.effect_delta},
                     {"rank", item.rank}});
  }
  doc["items"] = std::move(items);
  doc["n_swings"] = report.n_swings;
  return doc.dump(2) + "\n";
}

std::string feedback_text(const FeedbackReport& report) {
  std::string out = "feedback for golfer " + report.golfer_id + " (" + std::to_string(report.n_swings) +
                    " swings), target " + std::string(to_string(report.target)) + "\n";
  if (is_binary(report.target)) {
    out += "objective: maximize the contribution toward the straight class (positive class = straight)\n";
  } else {
    out += "objective: maximize the contribution to the predicted output\n";
  }
  char line[320];
  for (const FeedbackItem& item : report.items) {
    std::snprintf(line, sizeof(line), "%2zu. %-28s effect %+.4f  %s\n", item.rank, item.feature.c_str(),
                  item.effect_delta, item.advice().c_str());
    out += line;
  }
  out += "note: each feature is scored on its own; interactions between features are not modelled\n";
  return out;
}

namespace {

double population_std(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

}  // namespace

SessionComparison compare_sessions(const LabeledDataset& before, const LabeledDataset& after) {
  if (before.features.rows() == 0 || after.features.rows() == 0) {
    throw Error(ErrorCode::EmptyDataset, "each session needs at least one swing");
  }
  if (before.features.feature_names != after.features.feature_names) {
    throw Error(ErrorCode::DimensionMismatch, "sessions use different feature columns");
  }
  if (before.balls.size() != before.features.rows() || after.balls.size() != after.features.rows()) {
    throw Error(ErrorCode::LengthMismatch, "feature rows and ball records differ in count");
  }

  SessionComparison c;
  c.feature_names = before.features.feature_names;
  c.before_means = before.features.values.colwise().mean().transpose();
  c.after_means = after.features.values.colwise().mean().transpose();
  c.mean_shift = c.after_means - c.before_means;
  c.before_swings = before.features.rows();
  c.after_swings = after.features.rows();

  auto dispersion = [](const std::vector<BallRecord>& balls, double& lr_std, double& abs_dir) {
    std::vector<double> lr;
    double total = 0.0;
    for (const BallRecord& b : balls) {
      lr.push_back(b.lr_distance_out);
      total += std::abs(b.direction_angle);
    }
    lr_std = population_std(lr);
    abs_dir = total / static_cast<double>(balls.size());
  };
  dispersion(before.balls, c.before_lr_std, c.before_mean_abs_direction);
  dispersion(after.balls, c.after_lr_std, c.after_mean_abs_direction);
  return c;
}

std::string comparison_json(const SessionComparison& c) {
  nlohmann::ordered_json doc;
  doc["before_swings"] = c.before_swings;
  doc["after_swings"] = c.after_swings;
  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  for (std::size_t j = 0; j < c.feature_names.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    features.push_back({{"feature", c.feature_names[j]},
                        {"before_mean", c.before_means(i)},
                        {"after_mean", c.after_means(i)},
                        {"shift", c.mean_shift(i)}});
  }
  doc["features"] = std::move(features);
  doc["lr_distance_out_std"] = {{"before", c.before_lr_std}, {"after", c.after_lr_std}};
  doc["mean_abs_direction_angle"] = {{"before", c.before_mean_abs_direction}, {"after", c.after_mean_abs_direction}};
  return doc.dump(2) + "\n";
}

std::string comparison_text(const SessionComparison& c) {
  char line[256];
  std::string out;
  std::snprintf(line, sizeof(line), "sessions: %zu swings before, %zu after\n", c.before_swings, c.after_swings);
  out += line;
  std::snprintf(line, sizeof(line), "lr_distance_out std: %.4f -> %.4f\n", c.before_lr_std, c.after_lr_std);
  out += line;
  std::snprintf(line, sizeof(line), "mean |direction_angle|: %.4f -> %.4f\n", c.before_mean_abs_direction,
                c.after_mean_abs_direction);
  out += line;
  for (std::size_t j = 0; j < c.feature_names.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    std::snprintf(line, sizeof(line), "%-28s %12.4f -> %12.4f  (%+.4f)\n", c.feature_names[j].c_str(),
                  c.before_means(i), c.after_means(i), c.mean_shift(i));
    out += line;
  }
  return out;
}

std::string curves_csv(const std::vector<ShapeCurve>& curves) {
  std::string out = "feature,x,f,density_bin_count\n";
  for (const ShapeCurve& curve : curves) {
    const std::string name = io::quote_csv_field(curve.feature);
    for (std::size_t i = 0; i < curve.xs.size(); ++i) {
      out += name + "," + io::format_real(curve.xs[i]) + "," + io::format_real(curve.ys[i]) + "," +
             std::to_string(curve.density.count_at(curve.xs[i])) + "\n";
    }
  }
  return out;
}

void export_curves_csv(const std::vector<ShapeCurve>& curves, const std::filesystem::path& path) {
  io::write_text_file(path, curves_csv(curves));
}

}  // namespace swingnam
