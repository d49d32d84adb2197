#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "swingnam/error.hpp"
#include "swingnam/geometry.hpp"
#include "swingnam/random.hpp"

namespace swingnam {

using geometry::Point2d;

// Fixed 17-keypoint order of the pose estimator output.
enum class JointName : std::uint8_t {
  Nose,
  L_Eye,
  R_Eye,
  L_Ear,
  R_Ear,
  L_Shoulder,
  R_Shoulder,
  L_Elbow,
  R_Elbow,
  L_Wrist,
  R_Wrist,
  L_Hip,
  R_Hip,
  L_Knee,
  R_Knee,
  L_Ankle,
  R_Ankle,
};
inline constexpr std::size_t kJointCount = 17;

std::string_view to_string(JointName joint);
std::optional<JointName> parse_joint_name(std::string_view name);
// Left/right counterpart; midline joints map to themselves.
JointName opposite_side(JointName joint);

enum class SwingEvent : std::uint8_t {
  Address = 0,
  Takeaway = 1,
  Backswing = 2,
  Top = 3,
  Downswing = 4,
  Impact = 5,
  FollowThrough = 6,
  Finish = 7,
};
inline constexpr std::size_t kEventCount = 8;
inline constexpr std::array<SwingEvent, kEventCount> kAllEvents = {
    SwingEvent::Address, SwingEvent::Takeaway, SwingEvent::Backswing,     SwingEvent::Top,
    SwingEvent::Downswing, SwingEvent::Impact, SwingEvent::FollowThrough, SwingEvent::Finish};

constexpr int index_of(SwingEvent event) { return static_cast<int>(event); }
std::optional<SwingEvent> event_from_index(int index);
std::string_view to_string(SwingEvent event);
// Key used in the keypoint JSON ("address", ..., "follow_through", "finish").
std::string_view json_key(SwingEvent event);

enum class View : std::uint8_t { FaceOn, Dtl };
std::string_view to_string(View view);
std::optional<View> parse_view(std::string_view text);

struct Joint {
  JointName name;
  double x;
  double y;
  double confidence;
};

// All 17 joints of one swing event, stored in JointName order.
struct JointSet {
  std::array<Point2d, kJointCount> position;
  std::array<double, kJointCount> confidence;

  JointSet() {
    position.fill(Point2d::Zero());
    confidence.fill(1.0);
  }

  const Point2d& operator[](JointName joint) const { return position[static_cast<std::size_t>(joint)]; }
  Point2d& operator[](JointName joint) { return position[static_cast<std::size_t>(joint)]; }

  Joint joint(JointName name) const {
    const auto i = static_cast<std::size_t>(name);
    return {name, position[i].x(), position[i].y(), confidence[i]};
  }

  bool operator==(const JointSet&) const = default;
};

struct BBox {
  double x = 0.0;
  double y = 0.0;
  double width = 1.0;
  double height = 1.0;

  bool operator==(const BBox&) const = default;
};

struct SwingSequence {
  std::string swing_id;
  std::string golfer_id;
  View view = View::FaceOn;
  BBox bbox;
  std::array<JointSet, kEventCount> events;

  const JointSet& at(SwingEvent event) const { return events[static_cast<std::size_t>(event)]; }
  JointSet& at(SwingEvent event) { return events[static_cast<std::size_t>(event)]; }

  bool operator==(const SwingSequence&) const = default;
};

enum class ClubType : std::uint8_t { W1, W3, I4, I5, I6, I7, I8, I9 };
std::string_view to_string(ClubType club);
std::optional<ClubType> parse_club_type(std::string_view text);

// One launch-monitor shot. Distances are in the monitor's unit (yards by
// convention). direction_angle < 0: ball starts left. spin_axis < 0: ball
// curves left.
struct BallRecord {
  std::string swing_id;
  ClubType club_type = ClubType::W1;
  double distance = 0.0;
  double carry = 0.0;
  double lr_distance_out = 0.0;
  double direction_angle = 0.0;
  double spin_axis = 0.0;
  double ball_speed = 1.0;

  bool operator==(const BallRecord&) const = default;
};

struct PairedShot {
  SwingSequence sequence;
  BallRecord ball;
};

struct PairingResult {
  std::vector<PairedShot> pairs;
  std::vector<std::string> unmatched_sequences;
  std::vector<std::string> unmatched_balls;
};

struct KeypointParseOptions {
  // Sequences holding any joint below this confidence are rejected (0 = off).
  double min_confidence = 0.0;
  // Reflect x and swap left/right joint names (left-handed input).
  bool mirror = false;
};

std::vector<SwingSequence> parse_keypoints(std::string_view json_text, const KeypointParseOptions& options = {},
                                           std::string_view source_name = "<memory>");
std::vector<SwingSequence> parse_keypoint_file(const std::filesystem::path& path,
                                               const KeypointParseOptions& options = {});
std::string serialize_keypoints(const std::vector<SwingSequence>& sequences);
void write_keypoint_file(const std::filesystem::path& path, const std::vector<SwingSequence>& sequences);

inline constexpr std::string_view kBallCsvHeader =
    "swing_id,club_type,distance,carry,lr_distance_out,direction_angle,spin_axis,ball_speed";

std::vector<BallRecord> parse_ball_csv_text(std::string_view text, std::string_view source_name = "<memory>");
std::vector<BallRecord> parse_ball_csv(const std::filesystem::path& path);
std::string serialize_ball_csv(const std::vector<BallRecord>& balls);

void validate(const BallRecord& ball);
void validate(const SwingSequence& sequence);

PairingResult pair_records(const std::vector<SwingSequence>& sequences, const std::vector<BallRecord>& balls);

// Translate by -bbox origin and divide by bbox width.
SwingSequence normalize_sequence(const SwingSequence& sequence);

// x -> -x about the bbox centre with left/right joint names swapped.
SwingSequence mirror_sequence(const SwingSequence& sequence);

inline std::size_t train_size_for(std::size_t n, double train_fraction) {
  return static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
}

// Seeded shuffle, then the first round(train_fraction * N) items form the
// training part.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_dataset(std::vector<T> items, double train_fraction,
                                                        std::uint64_t seed) {
  if (items.empty()) throw Error(ErrorCode::EmptyDataset, "cannot split an empty dataset");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "train_fraction must lie strictly between 0 and 1");
  }
  Rng rng(seed);
  rng.shuffle(items);
  const std::size_t n_train = train_size_for(items.size(), train_fraction);
  std::vector<T> train(std::make_move_iterator(items.begin()),
                       std::make_move_iterator(items.begin() + static_cast<std::ptrdiff_t>(n_train)));
  std::vector<T> test(std::make_move_iterator(items.begin() + static_cast<std::ptrdiff_t>(n_train)),
                      std::make_move_iterator(items.end()));
  return {std::move(train), std::move(test)};
}

}  // namespace swingnam
