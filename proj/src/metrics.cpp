#include "swingnam/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "swingnam/csv.hpp"
#include "swingnam/geometry.hpp"

namespace swingnam {

namespace {

using geometry::angle_from_horizontal;
using geometry::angle_from_vertical;
using geometry::distance;
using geometry::midpoint;
using geometry::rad_to_deg;
using geometry::vertex_angle;
using J = JointName;

struct MetricInfo {
  MetricId id;
  std::string_view name;
  Unit unit;
  View view;
};

constexpr std::array<MetricInfo, 24> kMetricTable = {{
    {MetricId::SHOULDER_ANGLE, "SHOULDER_ANGLE", Unit::Degree, View::FaceOn},
    {MetricId::UPPER_TILT, "UPPER_TILT", Unit::Ratio, View::FaceOn},
    {MetricId::STANCE_RATIO, "STANCE_RATIO", Unit::Ratio, View::FaceOn},
    {MetricId::HEAD_LOC, "HEAD_LOC", Unit::Ratio, View::FaceOn},
    {MetricId::SHOULDER_LOC, "SHOULDER_LOC", Unit::Ratio, View::FaceOn},
    {MetricId::LEFT_ARM_ANGLE, "LEFT_ARM_ANGLE", Unit::Degree, View::FaceOn},
    {MetricId::RIGHT_ARM_ANGLE, "RIGHT_ARM_ANGLE", Unit::Degree, View::FaceOn},
    {MetricId::HIP_ROTATION, "HIP_ROTATION", Unit::Degree, View::FaceOn},
    {MetricId::HIP_SHIFTED, "HIP_SHIFTED", Unit::Ratio, View::FaceOn},
    {MetricId::RIGHT_LEG_ANGLE, "RIGHT_LEG_ANGLE", Unit::Degree, View::FaceOn},
    {MetricId::SHOULDER_HANGING_BACK, "SHOULDER_HANGING_BACK", Unit::Ratio, View::FaceOn},
    {MetricId::HIP_HANGING_BACK, "HIP_HANGING_BACK", Unit::Ratio, View::FaceOn},
    {MetricId::RIGHT_ARMPIT_ANGLE, "RIGHT_ARMPIT_ANGLE", Unit::Degree, View::FaceOn},
    {MetricId::WEIGHT_SHIFT, "WEIGHT_SHIFT", Unit::Degree, View::FaceOn},
    {MetricId::FINISH_ANGLE, "FINISH_ANGLE", Unit::Degree, View::FaceOn},
    {MetricId::SPINE_ANGLE, "SPINE_ANGLE", Unit::Degree, View::Dtl},
    {MetricId::LOWER_ANGLE, "LOWER_ANGLE", Unit::Degree, View::Dtl},
    {MetricId::DTL_SHOULDER_ANGLE, "DTL_SHOULDER_ANGLE", Unit::Degree, View::Dtl},
    {MetricId::DTL_LEFT_ARM_ANGLE, "DTL_LEFT_ARM_ANGLE", Unit::Degree, View::Dtl},
    {MetricId::DTL_RIGHT_ARM_ANGLE, "DTL_RIGHT_ARM_ANGLE", Unit::Degree, View::Dtl},
    {MetricId::HIP_LINE, "HIP_LINE", Unit::Ratio, View::Dtl},
    {MetricId::HIP_ANGLE, "HIP_ANGLE", Unit::Degree, View::Dtl},
    {MetricId::RIGHT_DISTANCE, "RIGHT_DISTANCE", Unit::Ratio, View::Dtl},
    {MetricId::LEFT_LEG_ANGLE, "LEFT_LEG_ANGLE", Unit::Degree, View::Dtl},
}};

const MetricInfo& info(MetricId metric) { return kMetricTable[static_cast<std::size_t>(metric)]; }

Point2d head(const JointSet& j) { return midpoint(j[J::L_Ear], j[J::R_Ear]); }
Point2d shoulder_mid(const JointSet& j) { return midpoint(j[J::L_Shoulder], j[J::R_Shoulder]); }
Point2d hip_mid(const JointSet& j) { return midpoint(j[J::L_Hip], j[J::R_Hip]); }
Point2d ankle_mid(const JointSet& j) { return midpoint(j[J::L_Ankle], j[J::R_Ankle]); }

double checked_ratio(double numerator, double denominator, std::string_view what) {
  if (!(denominator > 0.0)) throw Error(ErrorCode::DegenerateSegment, std::string(what) + " has zero length");
  return numerator / denominator;
}

double address_stride(const JointSet& address) {
  const double stride = stride_length(address);
  if (!(stride > 0.0)) throw Error(ErrorCode::DegenerateStride, "zero ankle separation at Address");
  return stride;
}

// Apparent pelvis width shrinks as the hips rotate away from the camera plane.
double hip_rotation(const JointSet& now, const JointSet& address) {
  const double width_now = std::abs(now[J::L_Hip].x() - now[J::R_Hip].x());
  const double width_addr = std::abs(address[J::L_Hip].x() - address[J::R_Hip].x());
  const double ratio = checked_ratio(width_now, width_addr, "hip width at Address");
  return rad_to_deg(std::acos(std::clamp(ratio, 0.0, 1.0)));
}

double hip_shift(const JointSet& now, const JointSet& address) {
  return (hip_mid(now).x() - hip_mid(address).x()) / address_stride(address);
}

}  // namespace

std::span<const MetricId> metrics_for(View view) {
  if (view == View::FaceOn) return kFaceOnMetrics;
  return kDtlMetrics;
}

View view_of(MetricId metric) { return info(metric).view; }
Unit unit_of(MetricId metric) { return info(metric).unit; }
std::string_view to_string(MetricId metric) { return info(metric).name; }

std::optional<MetricId> parse_metric(std::string_view name) {
  std::string canonical(name);
  std::replace(canonical.begin(), canonical.end(), '-', '_');
  for (const MetricInfo& m : kMetricTable) {
    if (m.name == canonical) return m.id;
  }
  return std::nullopt;
}

std::string display_name(MetricId metric) {
  std::string name(to_string(metric));
  std::replace(name.begin(), name.end(), '_', '-');
  return name;
}

double stride_length(const JointSet& joints) { return std::abs(joints[J::L_Ankle].x() - joints[J::R_Ankle].x()); }

double compute_metric(MetricId metric, const JointSet& now, const JointSet& address) {
  switch (metric) {
    case MetricId::SHOULDER_ANGLE:
    case MetricId::DTL_SHOULDER_ANGLE:
      return angle_from_horizontal(now[J::L_Shoulder], now[J::R_Shoulder]);
    case MetricId::UPPER_TILT:
      return checked_ratio(distance(hip_mid(now), ankle_mid(now)), distance(shoulder_mid(now), hip_mid(now)),
                           "upper body segment");
    case MetricId::STANCE_RATIO:
      return checked_ratio(stride_length(now), distance(now[J::L_Shoulder], now[J::R_Shoulder]), "shoulder width");
    case MetricId::HEAD_LOC:
      return (head(now).x() - head(address).x()) / address_stride(address);
    case MetricId::SHOULDER_LOC:
      return (now[J::L_Shoulder].x() - address[J::L_Ankle].x()) / address_stride(address);
    case MetricId::LEFT_ARM_ANGLE:
    case MetricId::DTL_LEFT_ARM_ANGLE:
      return vertex_angle(now[J::L_Shoulder], now[J::L_Elbow], now[J::L_Wrist]);
    case MetricId::RIGHT_ARM_ANGLE:
    case MetricId::DTL_RIGHT_ARM_ANGLE:
      return vertex_angle(now[J::R_Shoulder], now[J::R_Elbow], now[J::R_Wrist]);
    case MetricId::HIP_ROTATION:
    case MetricId::HIP_ANGLE:
      return hip_rotation(now, address);
    case MetricId::HIP_SHIFTED:
    case MetricId::HIP_LINE:
      return hip_shift(now, address);
    case MetricId::RIGHT_LEG_ANGLE:
    case MetricId::LOWER_ANGLE:
      return vertex_angle(now[J::R_Hip], now[J::R_Knee], now[J::R_Ankle]);
    case MetricId::SHOULDER_HANGING_BACK:
      return (now[J::L_Shoulder].x() - now[J::L_Ankle].x()) / address_stride(address);
    case MetricId::HIP_HANGING_BACK:
      return (now[J::L_Hip].x() - now[J::L_Ankle].x()) / address_stride(address);
    case MetricId::RIGHT_ARMPIT_ANGLE:
      return vertex_angle(now[J::R_Elbow], now[J::R_Shoulder], now[J::R_Hip]);
    case MetricId::WEIGHT_SHIFT:
      return angle_from_vertical(now[J::L_Hip], now[J::L_Ankle]);
    case MetricId::FINISH_ANGLE:
      return angle_from_vertical(now[J::R_Hip], now[J::L_Ankle]);
    case MetricId::SPINE_ANGLE:
      return angle_from_horizontal(shoulder_mid(now), hip_mid(now));
    case MetricId::RIGHT_DISTANCE:
      return distance(now[J::R_Elbow], hip_mid(now)) / address_stride(address);
    case MetricId::LEFT_LEG_ANGLE:
      return vertex_angle(now[J::L_Hip], now[J::L_Knee], now[J::L_Ankle]);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown metric");
}

MetricValue compute_metric(MetricId metric, SwingEvent event, const JointSet& event_joints,
                           const JointSet& address_joints) {
  return {metric, event, compute_metric(metric, event_joints, address_joints)};
}

std::vector<MetricValue> compute_all(const SwingSequence& normalized) {
  const JointSet& address = normalized.at(SwingEvent::Address);
  if (!(stride_length(address) > 0.0)) {
    throw Error(ErrorCode::DegenerateStride, "swing '" + normalized.swing_id + "': zero ankle separation at Address");
  }
  const auto metrics = metrics_for(normalized.view);
  std::vector<MetricValue> values;
  values.reserve(metrics.size() * kEventCount);
  for (SwingEvent event : kAllEvents) {
    for (MetricId metric : metrics) {
      try {
        values.push_back(compute_metric(metric, event, normalized.at(event), address));
      } catch (const Error& e) {
        throw Error(e.code(), "swing '" + normalized.swing_id + "', event " + std::string(to_string(event)) +
                                  ", " + std::string(to_string(metric)) + ": " + e.what());
      }
    }
  }
  return values;
}

std::string metric_dump_rows(const SwingSequence& sequence, const std::vector<MetricValue>& values) {
  std::string out;
  const std::string prefix = io::quote_csv_field(sequence.swing_id) + "," + std::string(to_string(sequence.view)) + ",";
  for (const MetricValue& v : values) {
    out += prefix + std::to_string(index_of(v.event)) + "," + display_name(v.metric) + "," + io::format_real(v.value) +
           "\n";
  }
  return out;
}

}  // namespace swingnam
