#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "swingnam/evaluation.hpp"
#include "swingnam/metrics.hpp"
#include "swingnam/random.hpp"

namespace swingnam {

std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Linear: return "linear";
    case ShapeKind::Quadratic: return "quadratic";
    case ShapeKind::Sine: return "sine";
    case ShapeKind::StepSmooth: return "step";
    case ShapeKind::Zero: return "zero";
  }
  return "zero";
}

double GroundTruthTerm::operator()(double x) const {
  const double u = x - center;
  switch (kind) {
    case ShapeKind::Linear: return scale * u;
    case ShapeKind::Quadratic: return scale * u * u;
    case ShapeKind::Sine: return scale * std::sin(std::numbers::pi * u);
    case ShapeKind::StepSmooth: return scale * logistic(8.0 * u);
    case ShapeKind::Zero: return 0.0;
  }
  return 0.0;
}

SyntheticDataset generate_synthetic(std::uint64_t seed, std::size_t n, const SyntheticSpec& spec) {
  if (n == 0) throw Error(ErrorCode::EmptyDataset, "synthetic dataset needs at least one row");
  if (spec.terms.empty()) throw Error(ErrorCode::InvalidArgument, "synthetic dataset needs at least one term");
  if (!(spec.noise_std >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise_std must be non-negative");
  for (const GroundTruthTerm& t : spec.terms) {
    if (!(t.hi > t.lo)) throw Error(ErrorCode::InvalidArgument, "term range must satisfy lo < hi");
  }

  const auto rows = static_cast<Eigen::Index>(n);
  const auto d = static_cast<Eigen::Index>(spec.terms.size());
  SyntheticDataset out;
  out.truth = spec;
  out.X.resize(rows, d);
  out.y.resize(rows);
  out.noiseless.resize(rows);
  out.labels.resize(rows);

  Rng rng(seed);
  for (Eigen::Index i = 0; i < rows; ++i) {
    double sum = spec.bias;
    for (Eigen::Index j = 0; j < d; ++j) {
      const GroundTruthTerm& t = spec.terms[static_cast<std::size_t>(j)];
      const double x = rng.uniform(t.lo, t.hi);
      out.X(i, j) = x;
      sum += t(x);
    }
    out.noiseless(i) = sum;
  }
  for (Eigen::Index i = 0; i < rows; ++i) out.y(i) = out.noiseless(i) + spec.noise_std * rng.normal();

  std::vector<double> sorted(out.noiseless.data(), out.noiseless.data() + rows);
  std::sort(sorted.begin(), sorted.end());
  out.threshold = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  for (Eigen::Index i = 0; i < rows; ++i) out.labels(i) = out.noiseless(i) > out.threshold ? 1.0 : 0.0;
  return out;
}

namespace {

using J = JointName;

// Per-golfer body proportions, in pixels.
struct Build {
  double height;
  double stance;
  double shoulder;
  double hip;
  double crouch;
};

// Per-swing pose knobs at one event.
struct PoseKnobs {
  double stance_scale = 1.0;
  double shoulder_tilt_deg = 0.0;  // positive: lead (left) shoulder higher
  double head_shift = 0.0;         // pixels toward the target
  double hip_shift = 0.0;
  double hip_turn = 0.0;           // 0..0.8, narrows the visible hip width
  double lean = 0.0;               // upper body shift toward the target
  double arm_bend = 0.1;
};

JointSet pose(const Build& b, const PoseKnobs& k, double cx, double ground) {
  JointSet s;
  const double half_stance = 0.5 * b.stance * k.stance_scale;
  s[J::L_Ankle] = {cx + half_stance, ground};
  s[J::R_Ankle] = {cx - half_stance, ground};
  const double knee_y = ground - 0.26 * b.height;
  s[J::L_Knee] = {cx + 0.8 * half_stance + 0.3 * k.hip_shift, knee_y};
  s[J::R_Knee] = {cx - 0.8 * half_stance + 0.3 * k.hip_shift, knee_y};

  const double hip_y = ground - b.crouch * b.height;
  const double hip_cx = cx + k.hip_shift;
  const double half_hip = 0.5 * b.hip * std::cos(k.hip_turn);
  s[J::L_Hip] = {hip_cx + half_hip, hip_y};
  s[J::R_Hip] = {hip_cx - half_hip, hip_y};

  const double shoulder_y = hip_y - 0.3 * b.height;
  const double shoulder_cx = hip_cx + k.lean;
  const double tilt = k.shoulder_tilt_deg * std::numbers::pi / 180.0;
  const double half_sh = 0.5 * b.shoulder;
  s[J::L_Shoulder] = {shoulder_cx + half_sh * std::cos(tilt), shoulder_y - half_sh * std::sin(tilt)};
  s[J::R_Shoulder] = {shoulder_cx - half_sh * std::cos(tilt), shoulder_y + half_sh * std::sin(tilt)};

  const double head_x = shoulder_cx + k.head_shift;
  const double head_y = shoulder_y - 0.11 * b.height;
  s[J::Nose] = {head_x + 0.01 * b.height, head_y + 0.01 * b.height};
  s[J::L_Eye] = {head_x + 0.02 * b.height, head_y};
  s[J::R_Eye] = {head_x - 0.01 * b.height, head_y};
  s[J::L_Ear] = {head_x + 0.04 * b.height, head_y + 0.005 * b.height};
  s[J::R_Ear] = {head_x - 0.04 * b.height, head_y + 0.005 * b.height};

  // Hands meet in front of the body; the elbows bow outward.
  const Point2d hands{cx + 0.3 * k.lean, hip_y + 0.08 * b.height};
  for (auto [sh, el, wr, side] : {std::tuple{J::L_Shoulder, J::L_Elbow, J::L_Wrist, 1.0},
                                  std::tuple{J::R_Shoulder, J::R_Elbow, J::R_Wrist, -1.0}}) {
    const Point2d mid = 0.5 * (s[sh] + hands);
    s[el] = {mid.x() + side * k.arm_bend * b.height, mid.y()};
    s[wr] = {hands.x() + side * 0.01 * b.height, hands.y()};
  }
  return s;
}

BBox bounding_box(const SwingSequence& seq, double margin) {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (const JointSet& set : seq.events) {
    for (const Point2d& p : set.position) {
      x0 = std::min(x0, p.x());
      y0 = std::min(y0, p.y());
      x1 = std::max(x1, p.x());
      y1 = std::max(y1, p.y());
    }
  }
  return {x0 - margin, y0 - margin, x1 - x0 + 2 * margin, y1 - y0 + 2 * margin};
}

std::string numbered(const char* prefix, std::size_t i, int width) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, i);
  return buf;
}

}  // namespace

SyntheticSwingSet generate_synthetic_swings(std::uint64_t seed, const SyntheticSwingConfig& config) {
  if (config.swings == 0 || config.golfers == 0) {
    throw Error(ErrorCode::InvalidArgument, "synthetic swings need at least one swing and one golfer");
  }
  if (!(config.outcome_noise >= 0.0)) throw Error(ErrorCode::InvalidArgument, "outcome_noise must be non-negative");

  Rng rng(seed);
  std::vector<Build> builds;
  for (std::size_t g = 0; g < config.golfers; ++g) {
    const double height = rng.uniform(380.0, 460.0);
    builds.push_back({height, height * rng.uniform(0.26, 0.34), height * rng.uniform(0.22, 0.26),
                      height * rng.uniform(0.17, 0.2), rng.uniform(0.47, 0.53)});
  }

  constexpr std::array<ClubType, 4> kClubs = {ClubType::W1, ClubType::W3, ClubType::I5, ClubType::I7};
  SyntheticSwingSet out;
  for (std::size_t i = 0; i < config.swings; ++i) {
    const std::size_t g = i % config.golfers;
    const Build& b = builds[g];
    SwingSequence seq;
    seq.swing_id = numbered("swing", i + 1, 5);
    seq.golfer_id = numbered("golfer", g + 1, 3);
    seq.view = config.view;
    const double cx = rng.uniform(500.0, 700.0);
    const double ground = rng.uniform(620.0, 680.0);

    for (SwingEvent event : kAllEvents) {
      const double phase = static_cast<double>(index_of(event)) / static_cast<double>(kEventCount - 1);
      PoseKnobs k;
      k.stance_scale = rng.uniform(0.9, 1.1);
      k.shoulder_tilt_deg = rng.normal(16.0 - 10.0 * std::sin(std::numbers::pi * phase), 8.0);
      k.head_shift = event == SwingEvent::Address ? 0.0 : rng.normal(-0.3, 0.1) * b.stance;
      k.hip_shift = rng.normal(0.1 * phase, 0.05) * b.stance;
      k.hip_turn = rng.uniform(0.0, 0.3 + 0.5 * phase);
      k.lean = rng.normal(-0.05, 0.05) * b.height;
      k.arm_bend = rng.uniform(0.03, 0.12);
      seq.at(event) = pose(b, k, cx, ground);
      for (double& c : seq.at(event).confidence) c = rng.uniform(0.6, 1.0);
    }
    seq.bbox = bounding_box(seq, 10.0);

    // Outcomes planted on the features a caller would extract.
    const SwingSequence norm = normalize_sequence(seq);
    const JointSet& address = norm.at(SwingEvent::Address);
    const double head_loc = compute_metric(MetricId::HEAD_LOC, norm.at(SwingEvent::Backswing), address);
    const double shoulder = compute_metric(MetricId::SHOULDER_ANGLE, norm.at(SwingEvent::Impact), address);
    const double stance = compute_metric(MetricId::STANCE_RATIO, address, address);
    const double tilt = compute_metric(MetricId::UPPER_TILT, address, address);

    const double noise = config.outcome_noise;
    BallRecord ball;
    ball.swing_id = seq.swing_id;
    ball.club_type = kClubs[rng.below(kClubs.size())];
    ball.direction_angle = 60.0 * (head_loc + 0.3) + noise * rng.normal();
    ball.spin_axis = 0.8 * (shoulder - 16.0) + noise * rng.normal();
    ball.ball_speed = std::max(20.0, 140.0 + 25.0 * (stance - 1.25) - 40.0 * (tilt - 1.8) * (tilt - 1.8) +
                                         2.0 * noise * rng.normal());
    ball.carry = std::max(0.0, 1.6 * ball.ball_speed - 0.3 * std::abs(ball.spin_axis) + noise * rng.normal());
    ball.distance = ball.carry + rng.uniform(0.0, 20.0);
    ball.lr_distance_out = ball.distance * std::sin((ball.direction_angle + 0.5 * ball.spin_axis) * std::numbers::pi / 180.0);
    validate(ball);

    out.sequences.push_back(std::move(seq));
    out.balls.push_back(std::move(ball));
  }
  return out;
}

}  // namespace swingnam
