#include "swingnam/pose_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "swingnam/csv.hpp"

namespace swingnam {

namespace {

constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "Nose",     "L_Eye",   "R_Eye",   "L_Ear", "R_Ear", "L_Shoulder", "R_Shoulder", "L_Elbow", "R_Elbow",
    "L_Wrist",  "R_Wrist", "L_Hip",   "R_Hip", "L_Knee", "R_Knee",    "L_Ankle",    "R_Ankle"};

constexpr std::array<std::string_view, kEventCount> kEventNames = {
    "Address", "Takeaway", "Backswing", "Top", "Downswing", "Impact", "FollowThrough", "Finish"};

constexpr std::array<std::string_view, kEventCount> kEventKeys = {
    "address", "takeaway", "backswing", "top", "downswing", "impact", "follow_through", "finish"};

constexpr std::array<std::string_view, 8> kClubNames = {"W1", "W3", "I4", "I5", "I6", "I7", "I8", "I9"};

[[noreturn]] void schema_error(std::string_view source, std::string_view swing_id, const std::string& path,
                               const std::string& what) {
  std::string message = std::string(source) + ": ";
  if (!swing_id.empty()) message += "swing '" + std::string(swing_id) + "': ";
  message += path + ": " + what;
  throw Error(ErrorCode::SchemaViolation, message);
}

std::string require_string(const nlohmann::json& object, const char* key, std::string_view source,
                           std::string_view swing_id, const std::string& path) {
  const auto it = object.find(key);
  if (it == object.end() || !it->is_string()) {
    schema_error(source, swing_id, path + "." + key, "missing or not a string");
  }
  return it->get<std::string>();
}

double require_number(const nlohmann::json& value, std::string_view source, std::string_view swing_id,
                      const std::string& path) {
  if (!value.is_number()) schema_error(source, swing_id, path, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) schema_error(source, swing_id, path, "non-finite value");
  return v;
}

SwingSequence parse_swing(const nlohmann::json& item, std::size_t index, std::string_view source) {
  const std::string root = "[" + std::to_string(index) + "]";
  if (!item.is_object()) schema_error(source, "", root, "swing entry must be an object");

  SwingSequence seq;
  seq.swing_id = require_string(item, "swing_id", source, "", root);
  seq.golfer_id = require_string(item, "golfer_id", source, seq.swing_id, root);
  const std::string view_text = require_string(item, "view", source, seq.swing_id, root);
  const auto view = parse_view(view_text);
  if (!view) schema_error(source, seq.swing_id, root + ".view", "unknown view '" + view_text + "'");
  seq.view = *view;

  const auto bbox_it = item.find("bbox");
  if (bbox_it == item.end() || !bbox_it->is_array() || bbox_it->size() != 4) {
    schema_error(source, seq.swing_id, root + ".bbox", "expected [x, y, width, height]");
  }
  const auto& bbox = *bbox_it;
  seq.bbox = {require_number(bbox[0], source, seq.swing_id, root + ".bbox[0]"),
              require_number(bbox[1], source, seq.swing_id, root + ".bbox[1]"),
              require_number(bbox[2], source, seq.swing_id, root + ".bbox[2]"),
              require_number(bbox[3], source, seq.swing_id, root + ".bbox[3]")};
  if (!(seq.bbox.width > 0.0) || !(seq.bbox.height > 0.0)) {
    schema_error(source, seq.swing_id, root + ".bbox", "width and height must be positive");
  }

  const auto events_it = item.find("events");
  if (events_it == item.end() || !events_it->is_object()) {
    schema_error(source, seq.swing_id, root + ".events", "missing or not an object");
  }
  const auto& events = *events_it;
  if (events.size() != kEventCount) {
    schema_error(source, seq.swing_id, root + ".events",
                 "expected " + std::to_string(kEventCount) + " events, found " + std::to_string(events.size()));
  }
  for (auto it = events.begin(); it != events.end(); ++it) {
    if (std::find(kEventKeys.begin(), kEventKeys.end(), it.key()) == kEventKeys.end()) {
      schema_error(source, seq.swing_id, root + ".events", "unknown event '" + it.key() + "'");
    }
  }
  for (SwingEvent event : kAllEvents) {
    const std::string key(json_key(event));
    const std::string path = root + ".events." + key;
    const auto joints_it = events.find(key);
    if (joints_it == events.end()) schema_error(source, seq.swing_id, path, "event missing");
    const auto& joints = *joints_it;
    if (!joints.is_array() || joints.size() != kJointCount) {
      schema_error(source, seq.swing_id, path,
                   "expected " + std::to_string(kJointCount) + " joints, found " +
                       std::to_string(joints.is_array() ? joints.size() : 0));
    }
    JointSet& set = seq.at(event);
    for (std::size_t j = 0; j < kJointCount; ++j) {
      const std::string jpath = path + "[" + std::to_string(j) + "]";
      const auto& triple = joints[j];
      if (!triple.is_array() || triple.size() != 3) {
        schema_error(source, seq.swing_id, jpath, "expected [x, y, confidence]");
      }
      set.position[j] = Point2d(require_number(triple[0], source, seq.swing_id, jpath + "[0]"),
                                require_number(triple[1], source, seq.swing_id, jpath + "[1]"));
      const double c = require_number(triple[2], source, seq.swing_id, jpath + "[2]");
      if (c < 0.0 || c > 1.0) schema_error(source, seq.swing_id, jpath + "[2]", "confidence outside [0, 1]");
      set.confidence[j] = c;
    }
  }
  return seq;
}

}  // namespace

std::string_view to_string(JointName joint) { return kJointNames[static_cast<std::size_t>(joint)]; }

std::optional<JointName> parse_joint_name(std::string_view name) {
  for (std::size_t i = 0; i < kJointCount; ++i) {
    if (kJointNames[i] == name) return static_cast<JointName>(i);
  }
  return std::nullopt;
}

JointName opposite_side(JointName joint) {
  // Paired joints alternate L, R from L_Eye onward.
  const auto i = static_cast<std::uint8_t>(joint);
  if (i == 0) return joint;
  return static_cast<JointName>(i % 2 == 1 ? i + 1 : i - 1);
}

std::optional<SwingEvent> event_from_index(int index) {
  if (index < 0 || index >= static_cast<int>(kEventCount)) return std::nullopt;
  return static_cast<SwingEvent>(index);
}

std::string_view to_string(SwingEvent event) { return kEventNames[static_cast<std::size_t>(event)]; }
std::string_view json_key(SwingEvent event) { return kEventKeys[static_cast<std::size_t>(event)]; }

std::string_view to_string(View view) { return view == View::FaceOn ? "FACEON" : "DTL"; }

std::optional<View> parse_view(std::string_view text) {
  if (text == "FACEON") return View::FaceOn;
  if (text == "DTL") return View::Dtl;
  return std::nullopt;
}

std::string_view to_string(ClubType club) { return kClubNames[static_cast<std::size_t>(club)]; }

std::optional<ClubType> parse_club_type(std::string_view text) {
  for (std::size_t i = 0; i < kClubNames.size(); ++i) {
    if (kClubNames[i] == text) return static_cast<ClubType>(i);
  }
  return std::nullopt;
}

void validate(const SwingSequence& sequence) {
  if (!(sequence.bbox.width > 0.0) || !(sequence.bbox.height > 0.0)) {
    throw Error(ErrorCode::SchemaViolation, "swing '" + sequence.swing_id + "': bbox width and height must be positive");
  }
  for (SwingEvent event : kAllEvents) {
    const JointSet& set = sequence.at(event);
    for (std::size_t j = 0; j < kJointCount; ++j) {
      if (!set.position[j].allFinite() || !(set.confidence[j] >= 0.0 && set.confidence[j] <= 1.0)) {
        throw Error(ErrorCode::SchemaViolation, "swing '" + sequence.swing_id + "': event " +
                                                    std::string(to_string(event)) + " joint " +
                                                    std::string(kJointNames[j]) + " is invalid");
      }
    }
  }
}

std::vector<SwingSequence> parse_keypoints(std::string_view json_text, const KeypointParseOptions& options,
                                           std::string_view source_name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedFile, std::string(source_name) + ": " + e.what());
  }
  if (!doc.is_array()) {
    throw Error(ErrorCode::SchemaViolation, std::string(source_name) + ": top level must be an array of swings");
  }

  std::vector<SwingSequence> out;
  out.reserve(doc.size());
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    SwingSequence seq = parse_swing(doc[i], i, source_name);
    if (!seen.insert(seq.swing_id).second) {
      throw Error(ErrorCode::DuplicateSwingId, std::string(source_name) + ": swing id '" + seq.swing_id + "' repeats");
    }
    if (options.min_confidence > 0.0) {
      for (SwingEvent event : kAllEvents) {
        for (std::size_t j = 0; j < kJointCount; ++j) {
          if (seq.at(event).confidence[j] < options.min_confidence) {
            throw Error(ErrorCode::SchemaViolation,
                        std::string(source_name) + ": swing '" + seq.swing_id + "': " +
                            std::string(json_key(event)) + "." + std::string(kJointNames[j]) +
                            " confidence below gate " + io::format_real(options.min_confidence));
          }
        }
      }
    }
    out.push_back(options.mirror ? mirror_sequence(seq) : std::move(seq));
  }
  return out;
}

std::vector<SwingSequence> parse_keypoint_file(const std::filesystem::path& path, const KeypointParseOptions& options) {
  const std::string text = io::read_text_file(path);
  return parse_keypoints(text, options, path.string());
}

std::string serialize_keypoints(const std::vector<SwingSequence>& sequences) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const SwingSequence& seq : sequences) {
    nlohmann::ordered_json item;
    item["swing_id"] = seq.swing_id;
    item["golfer_id"] = seq.golfer_id;
    item["view"] = std::string(to_string(seq.view));
    item["bbox"] = {seq.bbox.x, seq.bbox.y, seq.bbox.width, seq.bbox.height};
    nlohmann::ordered_json events = nlohmann::ordered_json::object();
    for (SwingEvent event : kAllEvents) {
      nlohmann::ordered_json joints = nlohmann::ordered_json::array();
      const JointSet& set = seq.at(event);
      for (std::size_t j = 0; j < kJointCount; ++j) {
        joints.push_back({set.position[j].x(), set.position[j].y(), set.confidence[j]});
      }
      events[std::string(json_key(event))] = std::move(joints);
    }
    item["events"] = std::move(events);
    doc.push_back(std::move(item));
  }
  return doc.dump(1) + "\n";
}

void write_keypoint_file(const std::filesystem::path& path, const std::vector<SwingSequence>& sequences) {
  io::write_text_file(path, serialize_keypoints(sequences));
}

void validate(const BallRecord& ball) {
  const bool finite = std::isfinite(ball.distance) && std::isfinite(ball.carry) &&
                      std::isfinite(ball.lr_distance_out) && std::isfinite(ball.direction_angle) &&
                      std::isfinite(ball.spin_axis) && std::isfinite(ball.ball_speed);
  if (!finite) throw Error(ErrorCode::InvariantViolation, "swing '" + ball.swing_id + "': non-finite field");
  if (ball.distance < 0.0 || ball.carry < 0.0) {
    throw Error(ErrorCode::InvariantViolation, "swing '" + ball.swing_id + "': negative distance or carry");
  }
  if (ball.carry > ball.distance) {
    throw Error(ErrorCode::InvariantViolation, "swing '" + ball.swing_id + "': carry exceeds distance");
  }
  if (!(ball.ball_speed > 0.0)) {
    throw Error(ErrorCode::InvariantViolation, "swing '" + ball.swing_id + "': ball_speed must be positive");
  }
}

std::vector<BallRecord> parse_ball_csv_text(std::string_view text, std::string_view source_name) {
  const auto records = io::csv_records(text);
  const std::string source(source_name);
  if (records.empty()) throw Error(ErrorCode::MalformedFile, source + ": missing header row");
  if (records.front().second != kBallCsvHeader) {
    throw Error(ErrorCode::MalformedFile, source + ": header must be '" + std::string(kBallCsvHeader) + "'");
  }

  std::vector<BallRecord> balls;
  balls.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& [line_no, line] = records[r];
    const std::string where = source + ":" + std::to_string(line_no);
    const auto fields = io::split_csv_line(line);
    if (fields.size() != 8) {
      throw Error(ErrorCode::MalformedFile, where + ": expected 8 fields, found " + std::to_string(fields.size()));
    }
    BallRecord ball;
    ball.swing_id = fields[0];
    if (ball.swing_id.empty()) throw Error(ErrorCode::MalformedFile, where + ": empty swing_id");
    const auto club = parse_club_type(fields[1]);
    if (!club) throw Error(ErrorCode::UnknownClubType, where + ": unknown club type '" + fields[1] + "'");
    ball.club_type = *club;
    double* targets[] = {&ball.distance,        &ball.carry,     &ball.lr_distance_out,
                         &ball.direction_angle, &ball.spin_axis, &ball.ball_speed};
    for (std::size_t k = 0; k < 6; ++k) {
      const auto value = io::parse_real(fields[k + 2]);
      if (!value) throw Error(ErrorCode::MalformedFile, where + ": field " + std::to_string(k + 3) + " is not a number");
      *targets[k] = *value;
    }
    try {
      validate(ball);
    } catch (const Error& e) {
      throw Error(ErrorCode::InvariantViolation, where + " (row " + std::to_string(r) + "): " + e.what());
    }
    balls.push_back(std::move(ball));
  }
  return balls;
}

std::vector<BallRecord> parse_ball_csv(const std::filesystem::path& path) {
  return parse_ball_csv_text(io::read_text_file(path), path.string());
}

std::string serialize_ball_csv(const std::vector<BallRecord>& balls) {
  std::string out(kBallCsvHeader);
  out += '\n';
  for (const BallRecord& b : balls) {
    out += io::quote_csv_field(b.swing_id) + "," + std::string(to_string(b.club_type)) + "," +
           io::format_real(b.distance) + "," + io::format_real(b.carry) + "," + io::format_real(b.lr_distance_out) +
           "," + io::format_real(b.direction_angle) + "," + io::format_real(b.spin_axis) + "," +
           io::format_real(b.ball_speed) + "\n";
  }
  return out;
}

PairingResult pair_records(const std::vector<SwingSequence>& sequences, const std::vector<BallRecord>& balls) {
  std::unordered_map<std::string, std::size_t> ball_index;
  for (std::size_t i = 0; i < balls.size(); ++i) ball_index.emplace(balls[i].swing_id, i);

  PairingResult result;
  std::vector<bool> ball_used(balls.size(), false);
  for (const SwingSequence& seq : sequences) {
    const auto it = ball_index.find(seq.swing_id);
    if (it != ball_index.end() && !ball_used[it->second]) {
      ball_used[it->second] = true;
      result.pairs.push_back({seq, balls[it->second]});
    } else {
      result.unmatched_sequences.push_back(seq.swing_id);
    }
  }
  for (std::size_t i = 0; i < balls.size(); ++i) {
    if (!ball_used[i]) result.unmatched_balls.push_back(balls[i].swing_id);
  }
  return result;
}

SwingSequence normalize_sequence(const SwingSequence& sequence) {
  const BBox& box = sequence.bbox;
  if (!(box.width > 0.0)) {
    throw Error(ErrorCode::DegenerateBBox, "swing '" + sequence.swing_id + "': bbox width must be positive");
  }
  SwingSequence out = sequence;
  const Point2d origin(box.x, box.y);
  for (JointSet& set : out.events) {
    for (Point2d& p : set.position) p = (p - origin) / box.width;
  }
  out.bbox = {0.0, 0.0, 1.0, box.height / box.width};
  return out;
}

SwingSequence mirror_sequence(const SwingSequence& sequence) {
  SwingSequence out = sequence;
  const double axis2 = 2.0 * sequence.bbox.x + sequence.bbox.width;
  for (std::size_t e = 0; e < kEventCount; ++e) {
    const JointSet& src = sequence.events[e];
    JointSet& dst = out.events[e];
    for (std::size_t j = 0; j < kJointCount; ++j) {
      const auto to = static_cast<std::size_t>(opposite_side(static_cast<JointName>(j)));
      dst.position[to] = Point2d(axis2 - src.position[j].x(), src.position[j].y());
      dst.confidence[to] = src.confidence[j];
    }
  }
  return out;
}

}  // namespace swingnam
