#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <functional>
#include <unordered_map>

#include "swingnam/csv.hpp"
#include "swingnam/evaluation.hpp"
#include "swingnam/feedback.hpp"
#include "swingnam/metrics.hpp"
#include "swingnam/models.hpp"
#include "swingnam/pose_io.hpp"

namespace swingnam::cli {

namespace fs = std::filesystem;

namespace {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

struct PolicyOptions {
  double dir_threshold = 6.0;
  double spin_threshold = 10.0;

  LabelPolicy policy() const {
    LabelPolicy p{dir_threshold, spin_threshold};
    p.validate();
    return p;
  }
};

struct NamOptions {
  double learning_rate = TrainingConfig{}.learning_rate;
  int epochs = TrainingConfig{}.epochs;
  int batch_size = TrainingConfig{}.batch_size;
  double l2 = TrainingConfig{}.l2_penalty;
  double output_penalty = TrainingConfig{}.output_penalty;
  std::string hidden = "64,32";
  std::string activation = "softplus";
  std::string optimizer = "adam";

  TrainingConfig config(std::uint64_t seed) const {
    TrainingConfig c;
    c.learning_rate = learning_rate;
    c.epochs = epochs;
    c.batch_size = batch_size;
    c.l2_penalty = l2;
    c.output_penalty = output_penalty;
    c.seed = seed;
    c.hidden_sizes.clear();
    for (const std::string& part : io::split_csv_line(hidden)) {
      const auto v = io::parse_real(part);
      if (!v || *v < 1 || *v != std::floor(*v)) {
        throw Error(ErrorCode::InvalidArgument, "--hidden expects comma-separated positive integers");
      }
      c.hidden_sizes.push_back(static_cast<int>(*v));
    }
    if (activation == "softplus") {
      c.activation = Activation::Softplus;
    } else if (activation == "tanh") {
      c.activation = Activation::Tanh;
    } else {
      throw Error(ErrorCode::InvalidArgument, "--activation must be softplus or tanh");
    }
    if (optimizer == "adam") {
      c.optimizer = Optimizer::Adam;
    } else if (optimizer == "sgd") {
      c.optimizer = Optimizer::Sgd;
    } else {
      throw Error(ErrorCode::InvalidArgument, "--optimizer must be adam or sgd");
    }
    c.validate();
    return c;
  }
};

void add_policy(CLI::App* app, PolicyOptions& p) {
  app->add_option("--dir-threshold", p.dir_threshold, "Straight if |direction_angle| <= this (degrees)")
      ->capture_default_str();
  app->add_option("--spin-threshold", p.spin_threshold, "Straight if |spin_axis| <= this (degrees)")
      ->capture_default_str();
}

void add_nam(CLI::App* app, NamOptions& n) {
  app->add_option("--epochs", n.epochs, "NAM training epochs")->capture_default_str();
  app->add_option("--learning-rate", n.learning_rate, "NAM step size")->capture_default_str();
  app->add_option("--batch-size", n.batch_size, "NAM mini-batch size")->capture_default_str();
  app->add_option("--l2", n.l2, "NAM weight penalty")->capture_default_str();
  app->add_option("--output-penalty", n.output_penalty, "NAM penalty on squared contributions")
      ->capture_default_str();
  app->add_option("--hidden", n.hidden, "Hidden layer widths, comma separated")->capture_default_str();
  app->add_option("--activation", n.activation, "softplus or tanh")->capture_default_str();
  app->add_option("--optimizer", n.optimizer, "adam or sgd")->capture_default_str();
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

Target require_target(const std::string& text) {
  const auto t = parse_target(text);
  if (!t) throw Error(ErrorCode::InvalidArgument, "unknown target '" + text + "' (direction, spin or speed)");
  return *t;
}

LabeledDataset load_labeled(const fs::path& features, const fs::path& balls, Streams io_streams) {
  std::vector<std::string> unmatched;
  LabeledDataset data = join_features(read_feature_csv(features), parse_ball_csv(balls), &unmatched);
  if (!unmatched.empty()) {
    io_streams.err << "warning: " << unmatched.size() << " feature rows have no ball record and were dropped\n";
  }
  if (data.features.rows() == 0) throw Error(ErrorCode::EmptyDataset, "no feature row matched a ball record");
  return data;
}

// ---- extract ------------------------------------------------------------------

struct ExtractOptions {
  std::string keypoints;
  std::string balls;
  std::string schema;
  std::string out;
  bool mirror = false;
  double min_confidence = 0.0;
};

int cmd_extract(const ExtractOptions& o, Streams s) {
  const std::vector<SwingSequence> sequences =
      parse_keypoint_file(o.keypoints, KeypointParseOptions{o.min_confidence, o.mirror});
  if (sequences.empty()) throw Error(ErrorCode::EmptyDataset, o.keypoints + ": no swings");

  const View view = sequences.front().view;
  for (const SwingSequence& seq : sequences) {
    if (seq.view != view) {
      throw Error(ErrorCode::SchemaViolation, o.keypoints + ": swing '" + seq.swing_id +
                                                  "' mixes views in one file; extract each view separately");
    }
  }
  const FeatureSchema schema = o.schema.empty() ? default_schema(view) : load_schema_file(o.schema);
  if (schema.view() != view) {
    throw Error(ErrorCode::SchemaViolation, "schema view " + std::string(to_string(schema.view())) +
                                                " does not match the swings' view " + std::string(to_string(view)));
  }

  std::vector<BallRecord> balls;
  bool have_balls = false;
  if (!o.balls.empty()) {
    if (fs::exists(o.balls)) {
      balls = parse_ball_csv(o.balls);
      have_balls = true;
    } else {
      s.err << "warning: ball file '" << o.balls << "' not found; pairing columns left empty\n";
    }
  }
  std::unordered_map<std::string, const BallRecord*> ball_by_id;
  for (const BallRecord& b : balls) ball_by_id.emplace(b.swing_id, &b);

  std::vector<FeatureVector> vectors;
  std::string metric_dump = std::string(kMetricDumpHeader) + "\n";
  std::string pairing = std::string(kBallCsvHeader) + "\n";
  std::size_t skipped = 0, paired = 0;
  for (const SwingSequence& seq : sequences) {
    std::vector<MetricValue> values;
    try {
      values = compute_all(normalize_sequence(seq));
    } catch (const Error& e) {
      if (!is_degenerate_pose(e.code())) throw;
      s.err << "warning: skipped swing '" << seq.swing_id << "': " << e.what() << "\n";
      ++skipped;
      continue;
    }
    vectors.push_back(assemble(values, schema, seq.swing_id));
    metric_dump += metric_dump_rows(seq, values);

    const auto it = ball_by_id.find(seq.swing_id);
    if (it != ball_by_id.end()) {
      ++paired;
      const std::string row = serialize_ball_csv({*it->second});
      pairing += row.substr(row.find('\n') + 1);
    } else {
      pairing += io::quote_csv_field(seq.swing_id) + ",,,,,,,\n";
    }
  }
  if (vectors.empty()) throw Error(ErrorCode::EmptyDataset, "every swing was skipped");

  const fs::path out(o.out);
  write_feature_csv(out / "features.csv", make_feature_table(vectors, schema.names()));
  io::write_text_file(out / "metrics.csv", metric_dump);
  io::write_text_file(out / "pairing.csv", pairing);
  s.out << "extracted " << vectors.size() << " swings (" << schema.size() << " features, view "
        << to_string(view) << "), skipped " << skipped;
  if (have_balls) s.out << ", paired " << paired << " of " << vectors.size();
  s.out << " -> " << out.string() << "\n";
  return 0;
}

// ---- benchmark ------------------------------------------------------------------

struct BenchmarkOptions {
  std::string features;
  std::string balls;
  std::string out;
  std::uint64_t seed = 42;
  double train_fraction = 0.8;
  PolicyOptions policy;
  NamOptions nam;
};

int cmd_benchmark(const BenchmarkOptions& o, Streams s) {
  const LabeledDataset data = load_labeled(o.features, o.balls, s);
  BenchmarkConfig config;
  config.seed = o.seed;
  config.train_fraction = o.train_fraction;
  config.policy = o.policy.policy();
  config.nam = o.nam.config(o.seed);
  const BenchmarkResult result = benchmark(data, config);
  s.out << "seed: " << o.seed << "\n" << benchmark_table(result);
  if (!o.out.empty()) io::write_text_file(o.out, benchmark_json(result));
  return 0;
}

// ---- train ------------------------------------------------------------------

struct TrainOptions {
  std::string features;
  std::string balls;
  std::string out;
  std::string target = "direction";
  std::string model = "nam";
  std::uint64_t seed = 42;
  PolicyOptions policy;
  NamOptions nam;
};

int cmd_train(const TrainOptions& o, Streams s) {
  const Target target = require_target(o.target);
  const LabeledDataset data = load_labeled(o.features, o.balls, s);
  const Eigen::VectorXd y = target_values(data.balls, target, o.policy.policy());
  const Task task = task_for(target);

  Model model;
  if (o.model == "nam") {
    model = train_nam(data.features.values, y, task, o.nam.config(o.seed));
  } else if (o.model == "lr") {
    model = train_linear(data.features.values, y, task, BenchmarkConfig{}.linear);
  } else {
    throw Error(ErrorCode::InvalidArgument, "--model must be nam or lr");
  }
  std::visit(
      [&](auto& m) {
        m.header.target = std::string(to_string(target));
        m.header.feature_names = data.features.feature_names;
      },
      model);
  save_model(model, o.out);

  const Eigen::VectorXd predictions = predict_rows(model, data.features.values);
  s.out << "seed: " << o.seed << "\ntrained " << o.model << " on " << data.features.rows() << " swings for target "
        << to_string(target);
  if (task == Task::Binary) {
    s.out << ", train accuracy " << accuracy(as_span(predictions), as_span(y));
  } else {
    s.out << ", train mse " << mse(as_span(predictions), as_span(y));
  }
  s.out << " -> " << o.out << "\n";
  return 0;
}

AdditiveModel load_nam(const std::string& path) {
  Model model = load_model(path);
  if (!std::holds_alternative<AdditiveModel>(model)) {
    throw Error(ErrorCode::InvalidArgument, path + ": shape functions need a NAM model, not a linear one");
  }
  return std::get<AdditiveModel>(std::move(model));
}

// Reorders table columns to the model's feature order.
Eigen::MatrixXd aligned_columns(const FeatureTable& table, const std::vector<std::string>& names,
                                const std::string& source) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(table.rows()), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) {
    const auto it = std::find(table.feature_names.begin(), table.feature_names.end(), names[j]);
    if (it == table.feature_names.end()) {
      throw Error(ErrorCode::DimensionMismatch, source + ": missing feature column '" + names[j] + "'");
    }
    out.col(static_cast<Eigen::Index>(j)) = table.values.col(it - table.feature_names.begin());
  }
  return out;
}

Target model_target(const AdditiveModel& model) {
  const auto t = parse_target(model.header.target);
  if (t) return *t;
  return model.header.task == Task::Binary ? Target::Direction : Target::Speed;
}

// ---- explain ------------------------------------------------------------------

struct ExplainOptions {
  std::string model;
  std::string features;
  std::string out;
  std::size_t grid = 100;
  std::size_t bins = 20;
  std::optional<std::size_t> density_floor;
};

int cmd_explain(const ExplainOptions& o, Streams s) {
  const AdditiveModel model = load_nam(o.model);
  const Eigen::MatrixXd train = aligned_columns(read_feature_csv(o.features), model.header.feature_names, o.features);
  const std::vector<ShapeCurve> curves = extract_curves(model, train, CurveConfig{o.grid, o.bins, 1.0, 99.0});
  const Target target = model_target(model);
  const fs::path out(o.out);
  const std::size_t floor = o.density_floor.value_or(default_density_floor(static_cast<std::size_t>(train.rows())));
  std::size_t without_marker = 0;
  for (const ShapeCurve& curve : curves) {
    std::optional<double> marker;
    try {
      marker = optimal_value(curve, objective_for(target), floor);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoFeasibleRegion) throw;
      ++without_marker;
    }
    SvgOptions svg;
    svg.title = std::string(to_string(target)) + ": " + curve.feature;
    io::write_text_file(out / (std::string(to_string(target)) + "_" + curve.feature + ".svg"),
                        render_curve_svg(curve, marker, svg));
  }
  export_curves_csv(curves, out / "curves.csv");
  s.out << "wrote " << curves.size() << " SVG curves and curves.csv to " << out.string();
  if (without_marker) s.out << " (" << without_marker << " without an optimum marker)";
  s.out << "\n";
  return 0;
}

// ---- feedback ------------------------------------------------------------------

struct FeedbackOptions {
  std::string model;
  std::string features;
  std::string golfer_features;
  std::string golfer_id = "golfer";
  std::string out;
  std::size_t k = 3;
  std::size_t grid = 100;
  std::optional<std::size_t> density_floor;
};

int cmd_feedback(const FeedbackOptions& o, Streams s) {
  const AdditiveModel model = load_nam(o.model);
  const auto& names = model.header.feature_names;
  const Eigen::MatrixXd train = aligned_columns(read_feature_csv(o.features), names, o.features);
  const Eigen::MatrixXd golfer = aligned_columns(read_feature_csv(o.golfer_features), names, o.golfer_features);
  CurveConfig curve_config;
  curve_config.grid_size = o.grid;
  const std::vector<ShapeCurve> curves = extract_curves(model, train, curve_config);
  const FeedbackReport report =
      generate_feedback(model, curves, golfer, model_target(model), o.golfer_id, FeedbackConfig{o.k, o.density_floor});
  s.out << feedback_text(report);
  if (!o.out.empty()) io::write_text_file(o.out, feedback_json(report));
  return 0;
}

// ---- compare ------------------------------------------------------------------

struct CompareOptions {
  std::string before_features, before_balls, after_features, after_balls, out;
};

int cmd_compare(const CompareOptions& o, Streams s) {
  const SessionComparison c =
      compare_sessions(load_labeled(o.before_features, o.before_balls, s), load_labeled(o.after_features, o.after_balls, s));
  s.out << comparison_text(c);
  if (!o.out.empty()) io::write_text_file(o.out, comparison_json(c));
  return 0;
}

// ---- synth ------------------------------------------------------------------

struct SynthOptions {
  std::string out;
  std::uint64_t seed = 42;
  std::size_t swings = 200;
  std::size_t golfers = 10;
  std::string view = "FACEON";
  double noise = 1.0;
};

int cmd_synth(const SynthOptions& o, Streams s) {
  const auto view = parse_view(upper(o.view));
  if (!view) throw Error(ErrorCode::InvalidArgument, "--view must be FACEON or DTL");
  SyntheticSwingConfig config;
  config.swings = o.swings;
  config.golfers = o.golfers;
  config.view = *view;
  config.outcome_noise = o.noise;
  const SyntheticSwingSet set = generate_synthetic_swings(o.seed, config);
  const fs::path out(o.out);
  write_keypoint_file(out / "keypoints.json", set.sequences);
  io::write_text_file(out / "balls.csv", serialize_ball_csv(set.balls));
  s.out << "seed: " << o.seed << "\nwrote " << set.sequences.size() << " synthetic swings to " << out.string() << "\n";
  return 0;
}

// ---- correlate ------------------------------------------------------------------

struct CorrelateOptions {
  std::string features, balls, out;
  std::string field = "ball_speed";
};

int cmd_correlate(const CorrelateOptions& o, Streams s) {
  const auto field = parse_ball_field(o.field);
  if (!field) throw Error(ErrorCode::InvalidArgument, "unknown ball field '" + o.field + "'");
  const auto table = correlation_table(load_labeled(o.features, o.balls, s), *field);
  std::string csv = "feature,pearson_r\n";
  for (const FeatureCorrelation& row : table) {
    csv += io::quote_csv_field(row.feature) + "," + (row.r ? io::format_real(*row.r) : std::string()) + "\n";
  }
  s.out << csv;
  if (!o.out.empty()) io::write_text_file(o.out, csv);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Golf swing features, additive models and feedback"};
  app.name("swingnam");
  app.require_subcommand(1);
  Streams streams{out, err};
  std::function<int()> action;

  ExtractOptions ex;
  auto* extract = app.add_subcommand("extract", "Keypoints to feature CSV and metric dump");
  extract->add_option("--keypoints", ex.keypoints, "Keypoint JSON file")->required();
  extract->add_option("--balls", ex.balls, "Launch-monitor CSV (optional)");
  extract->add_option("--schema", ex.schema, "Feature schema JSON override");
  extract->add_option("--out", ex.out, "Output directory")->required();
  extract->add_flag("--mirror", ex.mirror, "Input is left-handed; reflect to right-handed");
  extract->add_option("--min-confidence", ex.min_confidence, "Reject swings with any joint below this confidence")
      ->capture_default_str();
  extract->callback([&] { action = [&] { return cmd_extract(ex, streams); }; });

  BenchmarkOptions bm;
  auto* bench = app.add_subcommand("benchmark", "Train and score LR and NAM on all three targets");
  bench->add_option("--features", bm.features, "Feature CSV")->required();
  bench->add_option("--balls", bm.balls, "Launch-monitor CSV")->required();
  bench->add_option("--out", bm.out, "JSON report path");
  bench->add_option("--seed", bm.seed, "Split and initialization seed")->capture_default_str();
  bench->add_option("--train-fraction", bm.train_fraction, "Training share of the split")->capture_default_str();
  add_policy(bench, bm.policy);
  add_nam(bench, bm.nam);
  bench->callback([&] { action = [&] { return cmd_benchmark(bm, streams); }; });

  TrainOptions tr;
  auto* train = app.add_subcommand("train", "Fit one model on every row and save it");
  train->add_option("--features", tr.features, "Feature CSV")->required();
  train->add_option("--balls", tr.balls, "Launch-monitor CSV")->required();
  train->add_option("--out", tr.out, "Model JSON path")->required();
  train->add_option("--target", tr.target, "direction, spin or speed")->capture_default_str();
  train->add_option("--model", tr.model, "nam or lr")->capture_default_str();
  train->add_option("--seed", tr.seed, "Initialization seed")->capture_default_str();
  add_policy(train, tr.policy);
  add_nam(train, tr.nam);
  train->callback([&] { action = [&] { return cmd_train(tr, streams); }; });

  ExplainOptions xp;
  auto* explain = app.add_subcommand("explain", "Render NAM shape functions as SVG and CSV");
  explain->add_option("--model", xp.model, "NAM model JSON")->required();
  explain->add_option("--features", xp.features, "Training feature CSV (grid range and density)")->required();
  explain->add_option("--out", xp.out, "Output directory")->required();
  explain->add_option("--grid", xp.grid, "Grid points per curve")->capture_default_str();
  explain->add_option("--bins", xp.bins, "Density histogram bins")->capture_default_str();
  explain->add_option("--density-floor", xp.density_floor, "Minimum bin count for the optimum marker");
  explain->callback([&] { action = [&] { return cmd_explain(xp, streams); }; });

  FeedbackOptions fb;
  auto* feedback = app.add_subcommand("feedback", "Ranked per-feature advice for one golfer");
  feedback->add_option("--model", fb.model, "NAM model JSON")->required();
  feedback->add_option("--features", fb.features, "Training feature CSV")->required();
  feedback->add_option("--golfer-features", fb.golfer_features, "Feature CSV of the golfer's swings")->required();
  feedback->add_option("--golfer-id", fb.golfer_id, "Name shown in the report")->capture_default_str();
  feedback->add_option("--k", fb.k, "Number of recommendations")->capture_default_str();
  feedback->add_option("--grid", fb.grid, "Grid points per curve")->capture_default_str();
  feedback->add_option("--density-floor", fb.density_floor, "Minimum bin count for a recommended value");
  feedback->add_option("--out", fb.out, "JSON report path");
  feedback->callback([&] { action = [&] { return cmd_feedback(fb, streams); }; });

  CompareOptions cp;
  auto* compare = app.add_subcommand("compare", "Before/after session statistics");
  compare->add_option("--before-features", cp.before_features, "Feature CSV before")->required();
  compare->add_option("--before-balls", cp.before_balls, "Ball CSV before")->required();
  compare->add_option("--after-features", cp.after_features, "Feature CSV after")->required();
  compare->add_option("--after-balls", cp.after_balls, "Ball CSV after")->required();
  compare->add_option("--out", cp.out, "JSON output path");
  compare->callback([&] { action = [&] { return cmd_compare(cp, streams); }; });

  SynthOptions sy;
  auto* synth = app.add_subcommand("synth", "Write synthetic keypoints and ball records");
  synth->add_option("--out", sy.out, "Output directory")->required();
  synth->add_option("--seed", sy.seed, "Generator seed")->capture_default_str();
  synth->add_option("--swings", sy.swings, "Number of swings")->capture_default_str();
  synth->add_option("--golfers", sy.golfers, "Number of golfers")->capture_default_str();
  synth->add_option("--view", sy.view, "FACEON or DTL")->capture_default_str();
  synth->add_option("--noise", sy.noise, "Outcome noise scale")->capture_default_str();
  synth->callback([&] { action = [&] { return cmd_synth(sy, streams); }; });

  CorrelateOptions co;
  auto* correlate = app.add_subcommand("correlate", "Pearson r of every feature against a ball field");
  correlate->add_option("--features", co.features, "Feature CSV")->required();
  correlate->add_option("--balls", co.balls, "Ball CSV")->required();
  correlate->add_option("--field", co.field, "distance, carry, lr_distance_out, direction_angle, spin_axis, ball_speed")
      ->capture_default_str();
  correlate->add_option("--out", co.out, "CSV output path");
  correlate->callback([&] { action = [&] { return cmd_correlate(co, streams); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    return action ? action() : 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace swingnam::cli
