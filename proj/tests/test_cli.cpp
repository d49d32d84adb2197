#include <doctest.h>

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"
#include "swingnam/csv.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "swingnam");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = swingnam::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) { return swingnam::io::read_text_file(p); }

std::size_t count_files(const fs::path& dir, const std::string& ext) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ext;
  return n;
}

const std::vector<std::string> kQuickNam = {"--epochs", "5", "--hidden", "8,4"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// synth + extract into dir; returns features.csv path.
fs::path prepared(const support::TempDir& dir, std::size_t swings) {
  const std::string d = dir.path().string();
  REQUIRE(run({"synth", "--out", d, "--seed", "11", "--swings", std::to_string(swings)}).code == 0);
  REQUIRE(run({"extract", "--keypoints", d + "/keypoints.json", "--balls", d + "/balls.csv", "--out", d}).code == 0);
  return dir / "features.csv";
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"extract", "--help"}).code == 0);
  CHECK(run({"extract"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"synth", "--out", "x", "--swings", "many"}).code == 2);
}

TEST_CASE("synth is deterministic for a seed") {
  support::TempDir a("cli_synth_a"), b("cli_synth_b");
  const RunResult r = run({"synth", "--out", a.path().string(), "--seed", "7", "--swings", "30"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("seed: 7\n", 0) == 0);
  CHECK(run({"synth", "--out", b.path().string(), "--seed", "7", "--swings", "30"}).code == 0);
  CHECK(slurp(a / "keypoints.json") == slurp(b / "keypoints.json"));
  CHECK(slurp(a / "balls.csv") == slurp(b / "balls.csv"));
  CHECK(run({"synth", "--out", a.path().string(), "--view", "sideways"}).code == 2);
}

TEST_CASE("extract writes features, metrics and pairing") {
  support::TempDir dir("cli_extract");
  const std::string d = dir.path().string();
  REQUIRE(run({"synth", "--out", d, "--seed", "3", "--swings", "1"}).code == 0);
  const RunResult r = run({"extract", "--keypoints", d + "/keypoints.json", "--balls", d + "/balls.csv", "--out", d + "/o"});
  CHECK(r.code == 0);
  const std::string features = slurp(dir / "o/features.csv");
  const std::string header = features.substr(0, features.find('\n'));
  CHECK(std::count(header.begin(), header.end(), ',') == 40);  // swing_id + 40 features
  CHECK(std::count(features.begin(), features.end(), '\n') == 2);
  const std::string metrics = slurp(dir / "o/metrics.csv");
  CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 1 + 15 * 8);
  CHECK(slurp(dir / "o/pairing.csv").find(",,,,") == std::string::npos);

  const RunResult missing =
      run({"extract", "--keypoints", d + "/keypoints.json", "--balls", d + "/none.csv", "--out", d + "/p"});
  CHECK(missing.code == 0);
  CHECK(missing.err.find("warning") != std::string::npos);
  CHECK(fs::exists(dir / "p/features.csv"));
  CHECK(slurp(dir / "p/pairing.csv").find(",,,,,,,") != std::string::npos);

  // Second swing with both ankles on one spot at Address is skipped, not fatal.
  REQUIRE(run({"synth", "--out", d + "/two", "--seed", "3", "--swings", "2"}).code == 0);
  auto doc = nlohmann::json::parse(slurp(dir / "two/keypoints.json"));
  doc[1]["events"]["address"][15] = doc[1]["events"]["address"][16];
  swingnam::io::write_text_file(dir / "two/keypoints.json", doc.dump());
  const RunResult degenerate = run({"extract", "--keypoints", d + "/two/keypoints.json", "--out", d + "/two"});
  CHECK(degenerate.code == 0);
  CHECK(degenerate.err.find("DegenerateStride") != std::string::npos);
  const std::string kept = slurp(dir / "two/features.csv");
  CHECK(std::count(kept.begin(), kept.end(), '\n') == 2);

  swingnam::io::write_text_file(dir / "bad.json", "[{\"swing_id\": ");
  CHECK(run({"extract", "--keypoints", d + "/bad.json", "--out", d + "/q"}).code == 2);
  CHECK(run({"extract", "--keypoints", d + "/absent.json", "--out", d + "/q"}).code == 1);
}

TEST_CASE("extract with a DTL file and a mirrored file") {
  support::TempDir dir("cli_dtl");
  const std::string d = dir.path().string();
  REQUIRE(run({"synth", "--out", d, "--seed", "4", "--swings", "3", "--view", "DTL"}).code == 0);
  CHECK(run({"extract", "--keypoints", d + "/keypoints.json", "--out", d, "--mirror"}).code == 0);
  const std::string features = slurp(dir / "features.csv");
  const std::string header = features.substr(0, features.find('\n'));
  CHECK(std::count(header.begin(), header.end(), ',') == 28);
}

TEST_CASE("benchmark is reproducible and reports skips") {
  support::TempDir dir("cli_bench");
  const std::string d = dir.path().string();
  prepared(dir, 60);
  const auto base = with({"benchmark", "--features", d + "/features.csv", "--balls", d + "/balls.csv"}, kQuickNam);
  const RunResult first = run(with(base, {"--out", d + "/a.json"}));
  REQUIRE(first.code == 0);
  CHECK(first.out.rfind("seed: 42\n", 0) == 0);
  REQUIRE(run(with(base, {"--out", d + "/b.json"})).code == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  const auto doc = nlohmann::json::parse(slurp(dir / "a.json"));
  CHECK(doc["reports"].size() == 6);
  CHECK(doc["reports"][0]["n_train"] == 48);

  const RunResult skipped = run(with(base, {"--dir-threshold", "1000", "--out", d + "/c.json"}));
  CHECK(skipped.code == 0);
  CHECK(skipped.out.find("DegenerateLabels") != std::string::npos);
  const auto doc2 = nlohmann::json::parse(slurp(dir / "c.json"));
  CHECK(doc2["reports"].size() == 4);
  CHECK(doc2["skipped"].size() == 2);
}

TEST_CASE("train, explain, feedback and compare") {
  support::TempDir dir("cli_pipeline");
  const std::string d = dir.path().string();
  prepared(dir, 80);
  const auto trained = run(with({"train", "--features", d + "/features.csv", "--balls", d + "/balls.csv", "--out",
                                 d + "/speed.json", "--target", "speed"},
                                kQuickNam));
  REQUIRE(trained.code == 0);

  const RunResult explained = run({"explain", "--model", d + "/speed.json", "--features", d + "/features.csv", "--out",
                                   d + "/curves", "--grid", "25"});
  REQUIRE(explained.code == 0);
  CHECK(count_files(dir / "curves", ".svg") == 40);
  CHECK(count_files(dir / "curves", ".csv") == 1);
  const std::string csv = slurp(dir / "curves/curves.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 40 * 25);
  CHECK(fs::exists(dir / "curves/speed_2-HEAD-LOC.svg"));

  const RunResult fb = run({"feedback", "--model", d + "/speed.json", "--features", d + "/features.csv",
                            "--golfer-features", d + "/features.csv", "--golfer-id", "g1", "--k", "3", "--out",
                            d + "/fb.json"});
  REQUIRE(fb.code == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "fb.json"));
  CHECK(report["items"].size() == 3);
  CHECK(report["golfer_id"] == "g1");
  CHECK(report["n_swings"] == 80);
  CHECK(run({"feedback", "--model", d + "/speed.json", "--features", d + "/features.csv", "--golfer-features",
             d + "/features.csv", "--k", "0"})
            .code == 2);

  REQUIRE(run(with({"train", "--features", d + "/features.csv", "--balls", d + "/balls.csv", "--out", d + "/lr.json",
                    "--model", "lr", "--target", "direction"},
                   {}))
              .code == 0);
  CHECK(run({"explain", "--model", d + "/lr.json", "--features", d + "/features.csv", "--out", d + "/x"}).code == 2);

  const RunResult cmp = run({"compare", "--before-features", d + "/features.csv", "--before-balls", d + "/balls.csv",
                             "--after-features", d + "/features.csv", "--after-balls", d + "/balls.csv", "--out",
                             d + "/cmp.json"});
  CHECK(cmp.code == 0);
  CHECK(fs::exists(dir / "cmp.json"));

  const RunResult corr = run({"correlate", "--features", d + "/features.csv", "--balls", d + "/balls.csv", "--field",
                              "ball_speed"});
  CHECK(corr.code == 0);
  CHECK(std::count(corr.out.begin(), corr.out.end(), '\n') == 41);
  CHECK(run({"correlate", "--features", d + "/features.csv", "--balls", d + "/balls.csv", "--field", "nope"}).code == 2);
}
