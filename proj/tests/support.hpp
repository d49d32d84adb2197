#pragma once

// Hand-rolled generators and independent oracles shared by the test binaries.

#include <Eigen/Core>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swingnam/metrics.hpp"
#include "swingnam/pose_io.hpp"
#include "swingnam/random.hpp"

namespace support {

using namespace swingnam;

inline Point2d random_point(Rng& rng, double lo = 0.0, double hi = 100.0) {
  return {rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

// Joints scattered uniformly inside a box; ankles at Address kept apart so
// the stride is never degenerate.
inline SwingSequence random_sequence(Rng& rng, View view = View::FaceOn, std::string id = "s") {
  SwingSequence seq;
  seq.swing_id = std::move(id);
  seq.golfer_id = "g";
  seq.view = view;
  seq.bbox = {rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0), rng.uniform(500.0, 900.0), rng.uniform(500.0, 900.0)};
  for (JointSet& set : seq.events) {
    for (std::size_t j = 0; j < kJointCount; ++j) {
      set.position[j] = {seq.bbox.x + rng.uniform(0.0, seq.bbox.width), seq.bbox.y + rng.uniform(0.0, seq.bbox.height)};
      set.confidence[j] = rng.uniform(0.5, 1.0);
    }
  }
  JointSet& address = seq.at(SwingEvent::Address);
  const double gap = rng.uniform(40.0, 200.0);
  address[JointName::L_Ankle].x() = address[JointName::R_Ankle].x() + gap;
  return seq;
}

// x -> -x with no joint relabelling.
inline SwingSequence reflect(const SwingSequence& seq) {
  SwingSequence out = seq;
  out.bbox.x = -(seq.bbox.x + seq.bbox.width);
  for (JointSet& set : out.events) {
    for (Point2d& p : set.position) p.x() = -p.x();
  }
  return out;
}

inline SwingSequence scaled(const SwingSequence& seq, double k) {
  SwingSequence out = seq;
  out.bbox = {seq.bbox.x * k, seq.bbox.y * k, seq.bbox.width * k, seq.bbox.height * k};
  for (JointSet& set : out.events) {
    for (Point2d& p : set.position) p *= k;
  }
  return out;
}

// Under x -> -x (no relabelling) these metrics change sign; every other
// metric is unchanged.
inline bool negates_under_reflection(MetricId m) {
  switch (m) {
    case MetricId::SHOULDER_ANGLE:
    case MetricId::DTL_SHOULDER_ANGLE:
    case MetricId::HEAD_LOC:
    case MetricId::SHOULDER_LOC:
    case MetricId::HIP_SHIFTED:
    case MetricId::HIP_LINE:
    case MetricId::SHOULDER_HANGING_BACK:
    case MetricId::HIP_HANGING_BACK:
    case MetricId::WEIGHT_SHIFT:
    case MetricId::FINISH_ANGLE:
    case MetricId::SPINE_ANGLE:
      return true;
    default:
      return false;
  }
}

// Metrics measured against the golfer's own Address pose.
inline bool relative_to_address(MetricId m) {
  return m == MetricId::HEAD_LOC || m == MetricId::HIP_SHIFTED || m == MetricId::HIP_LINE ||
         m == MetricId::HIP_ROTATION || m == MetricId::HIP_ANGLE;
}

inline bool close(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); }

// Law of cosines, independent of the atan2 form used by the library.
inline double cosine_law_angle(const Point2d& a, const Point2d& b, const Point2d& c) {
  const double ab = std::hypot(a.x() - b.x(), a.y() - b.y());
  const double cb = std::hypot(c.x() - b.x(), c.y() - b.y());
  const double ac2 = (a.x() - c.x()) * (a.x() - c.x()) + (a.y() - c.y()) * (a.y() - c.y());
  double cosine = (ab * ab + cb * cb - ac2) / (2.0 * ab * cb);
  cosine = std::max(-1.0, std::min(1.0, cosine));
  return std::acos(cosine) * 180.0 / std::numbers::pi;
}

// All-pairs concordance: P(score_pos > score_neg) + 0.5 P(tie).
inline double brute_force_auc(std::span<const double> scores, std::span<const double> labels) {
  unsigned long long twice = 0, pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1.0) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0.0) continue;
      ++pairs;
      if (scores[i] > scores[j]) twice += 2;
      else if (scores[i] == scores[j]) twice += 1;
    }
  }
  return static_cast<double>(twice) / (2.0 * static_cast<double>(pairs));
}

// Raw-sums Pearson formula: (n Sxy - Sx Sy) / sqrt((n Sxx - Sx^2)(n Syy - Sy^2)).
inline double naive_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double n = static_cast<long double>(x.size()), sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  return static_cast<double>((n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy)));
}

// Code of the swingnam::Error thrown by f, or empty if nothing was thrown.
template <typename F>
std::optional<ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("swingnam_test_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

}  // namespace support
