#include <doctest.h>

#include <set>

#include "support.hpp"
#include "swingnam/features.hpp"

using namespace swingnam;
using support::error_code_of;

TEST_CASE("default schemas") {
  const FeatureSchema face = default_schema(View::FaceOn);
  const FeatureSchema dtl = default_schema(View::Dtl);
  CHECK(face.size() == 40);
  CHECK(dtl.size() == 28);
  for (const FeatureSchema* schema : {&face, &dtl}) {
    const auto names = schema->names();
    CHECK(std::set<std::string>(names.begin(), names.end()).size() == names.size());
    for (const FeatureKey& key : schema->entries()) CHECK(view_of(key.metric) == schema->view());
  }
  // Names the feedback examples refer to.
  for (const char* name : {"0-STANCE-RATIO", "2-HEAD-LOC", "5-SHOULDER-ANGLE"}) CHECK(face.index_of(name).has_value());
  CHECK(dtl.index_of("1-SPINE-ANGLE").has_value());
  CHECK(feature_name({MetricId::HEAD_LOC, SwingEvent::Backswing}) == "2-HEAD-LOC");
}

TEST_CASE("schema JSON round trip and validation") {
  const FeatureSchema face = default_schema(View::FaceOn);
  const FeatureSchema back = parse_schema_json(serialize_schema_json(face));
  CHECK(back.names() == face.names());
  CHECK(back.view() == View::FaceOn);

  CHECK(error_code_of([] { parse_schema_json("[{\"metric\":\"HEAD_LOC\",\"event\":2},{\"metric\":\"HEAD-LOC\",\"event\":2}]"); }) ==
        ErrorCode::SchemaViolation);
  CHECK(error_code_of([] { parse_schema_json("[{\"metric\":\"HEAD_LOC\",\"event\":2},{\"metric\":\"SPINE_ANGLE\",\"event\":1}]"); }) ==
        ErrorCode::SchemaViolation);
  CHECK(error_code_of([] { parse_schema_json("[{\"metric\":\"HEAD_LOC\",\"event\":8}]"); }) == ErrorCode::SchemaViolation);
  CHECK(error_code_of([] { parse_schema_json("[{\"metric\":\"NOPE\",\"event\":1}]"); }) == ErrorCode::SchemaViolation);
  CHECK(error_code_of([] { parse_schema_json("[]"); }) == ErrorCode::SchemaViolation);
  CHECK(error_code_of([] { parse_schema_json("[{"); }) == ErrorCode::MalformedFile);

  const FeatureSchema custom = parse_schema_json("[{\"metric\":\"HEAD-LOC\",\"event\":2},{\"metric\":\"STANCE_RATIO\",\"event\":0}]");
  CHECK(custom.names() == std::vector<std::string>{"2-HEAD-LOC", "0-STANCE-RATIO"});
}

TEST_CASE("schema fingerprint depends on names and order") {
  const std::vector<std::string> a = {"0-STANCE-RATIO", "2-HEAD-LOC"};
  const std::vector<std::string> b = {"2-HEAD-LOC", "0-STANCE-RATIO"};
  CHECK(schema_fingerprint(a) == schema_fingerprint(a));
  CHECK(schema_fingerprint(a) != schema_fingerprint(b));
  CHECK(schema_fingerprint(a).size() == 16);
  // FNV-1a 64 of the empty string.
  CHECK(schema_fingerprint({}) == "cbf29ce484222325");
}

TEST_CASE("extract_features follows the schema order and is scale invariant") {
  Rng rng(31);
  const FeatureSchema schema = default_schema(View::FaceOn);
  for (int i = 0; i < 30; ++i) {
    const SwingSequence s = support::random_sequence(rng);
    const FeatureVector v = extract_features(s, schema);
    CHECK(v.swing_id == s.swing_id);
    REQUIRE(v.values.size() == 40);
    const auto metrics = compute_all(normalize_sequence(s));
    for (std::size_t k = 0; k < schema.size(); ++k) {
      const FeatureKey& key = schema.entries()[k];
      for (const MetricValue& m : metrics) {
        if (m.metric == key.metric && m.event == key.event) CHECK(v.values(static_cast<Eigen::Index>(k)) == m.value);
      }
    }
    const FeatureVector w = extract_features(support::scaled(s, 2.0), schema);
    for (Eigen::Index k = 0; k < v.values.size(); ++k) CHECK(support::close(w.values(k), v.values(k)));
  }
}

TEST_CASE("assemble reports a missing metric") {
  const FeatureSchema schema = parse_schema_json("[{\"metric\":\"HEAD_LOC\",\"event\":2}]");
  const std::vector<MetricValue> values = {{MetricId::HEAD_LOC, SwingEvent::Top, 0.1}};
  CHECK(error_code_of([&] { assemble(values, schema, "x"); }) == ErrorCode::MissingMetric);
}

TEST_CASE("feature CSV round trip") {
  Rng rng(32);
  std::vector<FeatureVector> vectors;
  for (int i = 0; i < 10; ++i) {
    Eigen::VectorXd v(3);
    v << rng.normal(), rng.uniform(-1e6, 1e6), 1.0 / 3.0;
    vectors.push_back({"s" + std::to_string(i), v});
  }
  const FeatureTable table = make_feature_table(vectors, {"a", "b", "c"});
  const FeatureTable back = parse_feature_csv_text(serialize_feature_csv(table));
  CHECK(back.feature_names == table.feature_names);
  CHECK(back.swing_ids == table.swing_ids);
  CHECK(back.values == table.values);
  CHECK(error_code_of([] { parse_feature_csv_text("id,a\nx,1\n"); }) == ErrorCode::MalformedFile);
  CHECK(error_code_of([] { parse_feature_csv_text("swing_id,a\nx,1,2\n"); }) == ErrorCode::MalformedFile);
}

TEST_CASE("labels use inclusive thresholds") {
  const LabelPolicy policy;
  for (double sign : {1.0, -1.0}) {
    CHECK(label_direction(sign * 5.999, policy) == Straightness::Straight);
    CHECK(label_direction(sign * 6.0, policy) == Straightness::Straight);
    CHECK(label_direction(sign * 6.001, policy) == Straightness::NonStraight);
    CHECK(label_spin(sign * 9.999, policy) == Straightness::Straight);
    CHECK(label_spin(sign * 10.0, policy) == Straightness::Straight);
    CHECK(label_spin(sign * 10.001, policy) == Straightness::NonStraight);
  }
  Rng rng(33);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(-30, 30);
    CHECK(label_direction(a) == label_direction(-a));
    CHECK(label_spin(a) == label_spin(-a));
  }
  CHECK(error_code_of([] { LabelPolicy{0.0, 10.0}.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("shot shape and target vectors") {
  BallRecord b;
  b.distance = b.carry = 100;
  CHECK(shot_shape(b) == ShotShape{StartDirection::Straight, Curvature::Straight});
  CHECK(shot_shape(b, {0.5, 0.5}) == ShotShape{StartDirection::Straight, Curvature::Straight});
  b.direction_angle = -7;
  b.spin_axis = 12;
  CHECK(shot_shape(b) == ShotShape{StartDirection::Pull, Curvature::Slice});

  std::vector<BallRecord> balls(3, b);
  balls[0].direction_angle = 3;
  balls[1].direction_angle = -6;
  balls[2].spin_axis = -10;
  balls[2].ball_speed = 150;
  CHECK(target_values(balls, Target::Direction) == Eigen::Vector3d(1, 1, 0));
  CHECK(target_values(balls, Target::Spin) == Eigen::Vector3d(0, 0, 1));
  CHECK(target_values(balls, Target::Speed)(2) == 150);
  CHECK(parse_target("spin") == Target::Spin);
  CHECK_FALSE(parse_target("launch").has_value());
  CHECK(is_binary(Target::Direction));
  CHECK_FALSE(is_binary(Target::Speed));
}

TEST_CASE("standardizer centres and scales with the population convention") {
  Rng rng(34);
  Eigen::MatrixXd X(200, 4);
  for (Eigen::Index r = 0; r < X.rows(); ++r) X.row(r) << rng.normal(5, 2), rng.uniform(-100, 100), 7.5, rng.normal();
  const Standardizer s = Standardizer::fit(X);
  const Eigen::MatrixXd Z = s.transform(X);
  for (Eigen::Index c : {0, 1, 3}) {
    CHECK(std::abs(Z.col(c).mean()) < 1e-9);
    const double var = (Z.col(c).array() - Z.col(c).mean()).square().sum() / 200.0;
    CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-9);
  }
  CHECK(s.constant[2]);
  CHECK(Z.col(2) == X.col(2));
  for (Eigen::Index c = 0; c < 4; ++c) CHECK(support::close(s.inverse(c, s.transform(c, 1.25)), 1.25));
  CHECK(error_code_of([&] { s.transform(Eigen::VectorXd(3)); }) == ErrorCode::DimensionMismatch);
  CHECK(error_code_of([] { Standardizer::fit(Eigen::MatrixXd(1, 2)); }) == ErrorCode::EmptyDataset);
}

TEST_CASE("pearson against the raw-sums oracle and its invariances") {
  Rng rng(35);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng.below(200);
    const double slope = rng.uniform(-2, 2);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.normal(0, 3);
      y[i] = slope * x[i] + rng.normal();
    }
    const double r = pearson(x, y);
    CHECK(std::abs(r - support::naive_pearson(x, y)) < 1e-9);
    const double a = rng.uniform(0.1, 10), b = rng.uniform(-50, 50);
    std::vector<double> xt(n), neg(n);
    for (std::size_t i = 0; i < n; ++i) {
      xt[i] = a * x[i] + b;
      neg[i] = -y[i];
    }
    CHECK(std::abs(pearson(xt, y) - r) < 1e-9);
    CHECK(std::abs(pearson(x, neg) + r) < 1e-9);
  }
  const std::vector<double> flat = {1, 1, 1}, v = {1, 2, 3};
  CHECK(error_code_of([&] { pearson(flat, v); }) == ErrorCode::ZeroVariance);
  CHECK(error_code_of([&] { pearson(v, std::vector<double>{1, 2}); }) == ErrorCode::LengthMismatch);
  CHECK(error_code_of([] { pearson(std::vector<double>{1}, std::vector<double>{2}); }) == ErrorCode::EmptyDataset);
}
