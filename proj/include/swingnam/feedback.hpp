#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "swingnam/evaluation.hpp"
#include "swingnam/features.hpp"
#include "swingnam/models.hpp"

namespace swingnam {

// Equal-width histogram; the last bin is closed on the right.
struct DensityHistogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  // Training rows the histogram was built from, including any outside the edges.
  std::size_t total = 0;

  std::size_t bins() const { return counts.size(); }
  // Bin holding x, clamped to the outer bins.
  std::size_t bin_of(double x) const;
  std::size_t count_at(double x) const { return counts[bin_of(x)]; }
  std::size_t mode_bin() const;
  double bin_center(std::size_t bin) const { return 0.5 * (edges[bin] + edges[bin + 1]); }
};

DensityHistogram make_histogram(const Eigen::VectorXd& values, double lo, double hi, std::size_t bins);

struct ShapeCurve {
  std::string feature;
  std::vector<double> xs;  // strictly increasing
  std::vector<double> ys;  // f_i(xs)
  DensityHistogram density;
};

// Linear-interpolated percentile, q in [0, 100].
double percentile(std::vector<double> values, double q);

struct CurveConfig {
  std::size_t grid_size = 100;
  std::size_t bins = 20;
  double lower_percentile = 1.0;
  double upper_percentile = 99.0;
};

ShapeCurve extract_curve(const AdditiveModel& model, std::size_t feature, const Eigen::VectorXd& train_column,
                         const CurveConfig& config = {});
std::vector<ShapeCurve> extract_curves(const AdditiveModel& model, const Eigen::MatrixXd& train,
                                       const CurveConfig& config = {});

// Both objectives take the argmax of f_i: for binary targets the positive
// class is "straight", so a larger contribution pushes toward straight.
enum class Objective { MaximizeStraightLogit, MaximizeOutput };
Objective objective_for(Target target);
std::string_view to_string(Objective objective);

// ceil(1% of n), at least 1.
std::size_t default_density_floor(std::size_t train_rows);

// Argmax of ys over grid points whose bin count reaches `floor`; ties go to
// the point nearest the density mode, then to the smaller x.
double optimal_value(const ShapeCurve& curve, Objective objective, std::size_t floor);

struct FeedbackItem {
  std::string feature;
  double current = 0.0;
  double optimal = 0.0;
  double effect_delta = 0.0;
  std::size_t rank = 0;

  std::string advice() const;
};

struct FeedbackReport {
  std::string golfer_id;
  Target target = Target::Direction;
  std::vector<FeedbackItem> items;
  std::size_t n_swings = 0;
};

struct FeedbackConfig {
  std::size_t k = 3;
  std::optional<std::size_t> density_floor;  // default_density_floor(train rows) when empty
};

// `curves` come from extract_curves on the same model; golfer_rows holds the
// golfer's raw feature vectors, one swing per row.
FeedbackReport generate_feedback(const AdditiveModel& model, const std::vector<ShapeCurve>& curves,
                                 const Eigen::MatrixXd& golfer_rows, Target target, const std::string& golfer_id,
                                 const FeedbackConfig& config = {});

std::string feedback_json(const FeedbackReport& report);
std::string feedback_text(const FeedbackReport& report);

struct SessionComparison {
  std::vector<std::string> feature_names;
  Eigen::VectorXd before_means;
  Eigen::VectorXd after_means;
  Eigen::VectorXd mean_shift;  // after - before
  double before_lr_std = 0.0;
  double after_lr_std = 0.0;
  double before_mean_abs_direction = 0.0;
  double after_mean_abs_direction = 0.0;
  std::size_t before_swings = 0;
  std::size_t after_swings = 0;
};

SessionComparison compare_sessions(const LabeledDataset& before, const LabeledDataset& after);
std::string comparison_json(const SessionComparison& comparison);
std::string comparison_text(const SessionComparison& comparison);

struct SvgOptions {
  int width = 640;
  int height = 400;
  std::string title;
};

std::string render_curve_svg(const ShapeCurve& curve, std::optional<double> marker = std::nullopt,
                             const SvgOptions& options = {});
std::string curves_csv(const std::vector<ShapeCurve>& curves);
void export_curves_csv(const std::vector<ShapeCurve>& curves, const std::filesystem::path& path);

}  // namespace swingnam
