#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swingnam/pose_io.hpp"

namespace swingnam {

enum class MetricId : std::uint8_t {
  // face-on
  SHOULDER_ANGLE,
  UPPER_TILT,
  STANCE_RATIO,
  HEAD_LOC,
  SHOULDER_LOC,
  LEFT_ARM_ANGLE,
  RIGHT_ARM_ANGLE,
  HIP_ROTATION,
  HIP_SHIFTED,
  RIGHT_LEG_ANGLE,
  SHOULDER_HANGING_BACK,
  HIP_HANGING_BACK,
  RIGHT_ARMPIT_ANGLE,
  WEIGHT_SHIFT,
  FINISH_ANGLE,
  // down-the-line
  SPINE_ANGLE,
  LOWER_ANGLE,
  DTL_SHOULDER_ANGLE,
  DTL_LEFT_ARM_ANGLE,
  DTL_RIGHT_ARM_ANGLE,
  HIP_LINE,
  HIP_ANGLE,
  RIGHT_DISTANCE,
  LEFT_LEG_ANGLE,
};

enum class Unit : std::uint8_t { Degree, Ratio };

inline constexpr std::array<MetricId, 15> kFaceOnMetrics = {
    MetricId::SHOULDER_ANGLE,     MetricId::UPPER_TILT,        MetricId::STANCE_RATIO,
    MetricId::HEAD_LOC,           MetricId::SHOULDER_LOC,      MetricId::LEFT_ARM_ANGLE,
    MetricId::RIGHT_ARM_ANGLE,    MetricId::HIP_ROTATION,      MetricId::HIP_SHIFTED,
    MetricId::RIGHT_LEG_ANGLE,    MetricId::SHOULDER_HANGING_BACK, MetricId::HIP_HANGING_BACK,
    MetricId::RIGHT_ARMPIT_ANGLE, MetricId::WEIGHT_SHIFT,      MetricId::FINISH_ANGLE};

inline constexpr std::array<MetricId, 9> kDtlMetrics = {
    MetricId::SPINE_ANGLE,         MetricId::LOWER_ANGLE, MetricId::DTL_SHOULDER_ANGLE,
    MetricId::DTL_LEFT_ARM_ANGLE,  MetricId::DTL_RIGHT_ARM_ANGLE, MetricId::HIP_LINE,
    MetricId::HIP_ANGLE,           MetricId::RIGHT_DISTANCE, MetricId::LEFT_LEG_ANGLE};

std::span<const MetricId> metrics_for(View view);
View view_of(MetricId metric);
Unit unit_of(MetricId metric);

// Enumerator spelling, e.g. "HEAD_LOC".
std::string_view to_string(MetricId metric);
std::optional<MetricId> parse_metric(std::string_view name);
// Hyphenated display name, e.g. "HEAD-LOC".
std::string display_name(MetricId metric);

struct MetricValue {
  MetricId metric;
  SwingEvent event;
  double value;
};

// Horizontal ankle separation at Address; the denominator for every
// stride-relative ratio.
double stride_length(const JointSet& joints);

// Evaluates one metric on `event_joints`, with `address_joints` as the
// reference pose. Both joint sets must already be normalized.
double compute_metric(MetricId metric, const JointSet& event_joints, const JointSet& address_joints);

MetricValue compute_metric(MetricId metric, SwingEvent event, const JointSet& event_joints,
                           const JointSet& address_joints);

// Every (metric, event) pair for the sequence's view, metric-major within each
// event. The sequence must already be normalized.
std::vector<MetricValue> compute_all(const SwingSequence& normalized);

// Metric dump CSV: swing_id,view,event_index,metric,value
inline constexpr std::string_view kMetricDumpHeader = "swing_id,view,event_index,metric,value";
std::string metric_dump_rows(const SwingSequence& sequence, const std::vector<MetricValue>& values);

}  // namespace swingnam
