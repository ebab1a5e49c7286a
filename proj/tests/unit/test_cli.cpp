#include <doctest.h>

#include <cstdlib>
#include <json.hpp>
#include <sstream>

#include "commands.hpp"
#include "helpers.hpp"
#include "htdc/csv.hpp"
#include "htdc/model_io.hpp"

using namespace htdc;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string p(const std::filesystem::path& path) { return path.string(); }

// Writes a small labeled detection fixture that reproduces the B1 confusion counts.
void write_b1_fixture(const test::TempDir& dir) {
  std::ostringstream det, lab;
  det << "timestamp,raw,smoothed,flag\n";
  lab << "timestamp,ATT_FLAG\n";
  for (int t = 0; t < 2089; ++t) {
    const bool a1 = t >= 100 && t < 300;
    const bool a2 = t >= 600 && t < 807;
    bool flag = false;
    if (a1) flag = t >= 114;
    if (a2) flag = !(t >= 700 && t < 705);
    if (t >= 1500 && t < 1505) flag = true;
    det << t << ",0,0," << (flag ? 1 : 0) << "\n";
    lab << t << "," << ((a1 || a2) ? 1 : 0) << "\n";
  }
  test::spit(dir / "det.csv", det.str());
  test::spit(dir / "labels.csv", lab.str());
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"train"}).code == 1);  // --data required
  CHECK(run({"synth", "--horizon", "abc"}).code == 1);
}

TEST_CASE("synth writes a 4000-row dataset and is repeatable") {
  test::TempDir dir("cli_synth");
  REQUIRE(run({"synth", "--out", p(dir / "a"), "--seed", "5"}).code == 0);
  REQUIRE(run({"synth", "--out", p(dir / "b"), "--seed", "5"}).code == 0);
  const auto f = load_csv(dir / "a" / "data.csv");
  CHECK(f.rows() == 4000);
  CHECK(f.labels.has_value());
  CHECK(test::slurp(dir / "a" / "data.csv") == test::slurp(dir / "b" / "data.csv"));
  CHECK(load_csv(dir / "a" / "labels.csv").labels->size() == 4000);
  CHECK(std::filesystem::exists(dir / "a" / "config.json"));
}

TEST_CASE("synth rejects a bad hysteresis config") {
  test::TempDir dir("cli_synth_bad");
  test::spit(dir / "cfg.json", R"({"system": {"pump_on_level": [6, 2.5, 1.5]}})");
  const auto r = run({"synth", "--config", p(dir / "cfg.json"), "--out", p(dir / "o")});
  CHECK(r.code == 1);
  CHECK(r.err.find("pump_off_level") != std::string::npos);
  CHECK(run({"synth", "--config", p(dir / "missing.json")}).code == 1);
}

TEST_CASE("seed precedence: flag over environment over config") {
  test::TempDir dir("cli_seed");
  test::spit(dir / "cfg.json", R"({"system": {"seed": 11, "horizon": 50}})");
  const std::string cfg = p(dir / "cfg.json");
  auto seed_of = [&](const std::string& sub) {
    return json::parse(test::slurp(dir / sub / "config.json"))["system"]["seed"].get<std::uint64_t>();
  };
  ::unsetenv("HTDC_SEED");
  REQUIRE(run({"synth", "--config", cfg, "--out", p(dir / "c")}).code == 0);
  CHECK(seed_of("c") == 11);
  ::setenv("HTDC_SEED", "22", 1);
  REQUIRE(run({"synth", "--config", cfg, "--out", p(dir / "e")}).code == 0);
  CHECK(seed_of("e") == 22);
  REQUIRE(run({"synth", "--config", cfg, "--seed", "33", "--out", p(dir / "f")}).code == 0);
  CHECK(seed_of("f") == 33);
  ::setenv("HTDC_SEED", "nope", 1);
  CHECK(run({"synth", "--config", cfg, "--out", p(dir / "g")}).code == 1);
  ::unsetenv("HTDC_SEED");
}

TEST_CASE("train, detect, report pipeline") {
  test::TempDir dir("cli_pipe");
  REQUIRE(run({"synth", "--out", p(dir / "tr"), "--seed", "3", "--horizon", "400", "--no-attacks"}).code == 0);
  REQUIRE(run({"synth", "--out", p(dir / "te"), "--seed", "4", "--horizon", "700"}).code == 0);

  const auto t = run({"train", "--data", p(dir / "tr" / "data.csv"), "--out", p(dir / "m"),
                      "--epochs", "5", "--seed", "1"});
  REQUIRE(t.code == 0);
  std::istringstream h(test::slurp(dir / "m" / "loss_history.csv"));
  std::string line;
  std::getline(h, line);
  CHECK(line == "epoch,rec_loss,tdc_loss,total");
  int rows = 0;
  while (std::getline(h, line)) ++rows;
  CHECK(rows == 5);
  const auto bundle = load_model(dir / "m" / "model.json");
  CHECK(bundle.config->epochs == 5);
  CHECK(bundle.calibration_scores.size() == 400);
  CHECK(std::filesystem::exists(dir / "m" / "scaler.json"));

  SUBCASE("detect with defaults and override") {
    REQUIRE(run({"detect", "--model", p(dir / "m" / "model.json"), "--data",
                 p(dir / "te" / "data.csv"), "--out", p(dir / "d")}).code == 0);
    const auto s = json::parse(test::slurp(dir / "d" / "detect.json"));
    CHECK(s["rows"] == 700);
    const auto cfg = json::parse(test::slurp(dir / "d" / "config.json"));
    CHECK(cfg["window"] == 7);
    CHECK(cfg["percentile"] == 95.0);
    const auto svg = test::slurp(dir / "d" / "detection.svg");
    CHECK(svg.find("class=\"threshold\"") != std::string::npos);
    CHECK(svg.find("class=\"label-region\"") != std::string::npos);

    REQUIRE(run({"detect", "--model", p(dir / "m" / "model.json"), "--data",
                 p(dir / "te" / "data.csv"), "--out", p(dir / "d2"), "--threshold", "0.5"}).code == 0);
    CHECK(json::parse(test::slurp(dir / "d2" / "detect.json"))["threshold"] == 0.5);

    REQUIRE(run({"detect", "--model", p(dir / "m" / "model.json"), "--data",
                 p(dir / "te" / "data.csv"), "--out", p(dir / "d3"), "--train",
                 p(dir / "tr" / "data.csv")}).code == 0);
    CHECK(json::parse(test::slurp(dir / "d3" / "detect.json"))["threshold"] ==
          s["threshold"]);

    CHECK(run({"detect", "--model", p(dir / "m" / "model.json"), "--data",
               p(dir / "te" / "data.csv"), "--smoothing", "weird"}).code == 1);

    const auto e = run({"evaluate", "--detections", p(dir / "d" / "detection.csv"), "--labels",
                        p(dir / "te" / "labels.csv"), "--out", p(dir / "ev")});
    CHECK(e.code == 0);
    CHECK(e.out.find("S_TTD") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "ev" / "metrics.json"));
  }

  SUBCASE("report") {
    REQUIRE(run({"report", "--model", p(dir / "m" / "model.json"), "--data",
                 p(dir / "te" / "data.csv"), "--out", p(dir / "r")}).code == 0);
    std::istringstream csv(test::slurp(dir / "r" / "latent_trace.csv"));
    std::getline(csv, line);
    CHECK(line == "timestamp,z1,z2,z3,zdot1,zdot2,zdot3,s1,cd_z1,cd_z2,cd_z3,ATT_FLAG");
    for (const char* f : {"latent_nodes.svg", "pair_1.svg", "pair_3.svg", "overlays.json"}) {
      CHECK(std::filesystem::exists(dir / "r" / f));
    }
  }

  SUBCASE("model/data feature mismatch is a user error") {
    const auto r = run({"detect", "--model", p(dir / "m" / "model.json"), "--data",
                        p(dir / "m" / "loss_history.csv")});
    CHECK(r.code == 1);
  }
}

TEST_CASE("train --alpha 0 and explicit hyperparameters") {
  test::TempDir dir("cli_alpha");
  REQUIRE(run({"synth", "--out", p(dir / "s"), "--horizon", "120", "--no-attacks"}).code == 0);
  REQUIRE(run({"train", "--data", p(dir / "s" / "data.csv"), "--out", p(dir / "m"), "--alpha",
               "0", "--epochs", "2", "--hidden", "5", "--pairs", "2", "--stat", "2"}).code == 0);
  const auto b = load_model(dir / "m" / "model.json");
  CHECK(b.config->alpha == 0.0);
  CHECK(b.model.partition() == LatentPartition{2, 2});
  CHECK(b.model.encoder().layer(0).out_size() == 5);
  CHECK(run({"train", "--data", p(dir / "s" / "data.csv"), "--batch", "0"}).code == 1);

  REQUIRE(run({"fit", "--data", p(dir / "s" / "data.csv"), "--out", p(dir / "f"), "--alpha", "0",
               "--epochs", "2", "--hidden", "5", "--pairs", "2", "--stat", "2"}).code == 0);
  CHECK(test::slurp(dir / "f" / "model.json") == test::slurp(dir / "m" / "model.json"));
}

TEST_CASE("train --edge selects BATADAL edge columns and defaults") {
  test::TempDir dir("cli_edge");
  const std::vector<std::string> edge1{"L_T1", "F_PU1", "S_PU1", "F_PU2", "S_PU2",
                                       "F_PU3", "S_PU3", "P_J280", "P_J269"};
  std::ostringstream csv;
  csv << "DATETIME,EXTRA";
  for (const auto& n : edge1) csv << "," << n;
  csv << ",ATT_FLAG\n";
  for (int t = 0; t < 60; ++t) {
    csv << t << ",1";
    for (std::size_t k = 0; k < edge1.size(); ++k) {
      csv << "," << std::sin(0.3 * t + static_cast<double>(k));
    }
    csv << ",-999\n";
  }
  test::spit(dir / "b.csv", csv.str());
  REQUIRE(run({"train", "--data", p(dir / "b.csv"), "--edge", "1", "--epochs", "1", "--out",
               p(dir / "m")}).code == 0);
  const auto b = load_model(dir / "m" / "model.json");
  CHECK(b.features == edge1);
  CHECK(b.config->hidden_size == 9);
  CHECK(b.config->learning_rate == 0.01);
  CHECK(b.config->alpha == 0.002);
  CHECK(b.model.partition() == LatentPartition{3, 1});

  const auto missing = run({"train", "--data", p(dir / "b.csv"), "--edge", "2"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("L_T2") != std::string::npos);
  CHECK(run({"train", "--data", p(dir / "b.csv"), "--edge", "7"}).code == 1);
}

TEST_CASE("numeric failure maps to exit code 2") {
  test::TempDir dir("cli_numeric");
  std::ostringstream csv;
  csv << "a,b\n";
  for (int t = 0; t < 40; ++t) csv << (t % 9 == 0 ? 1e300 : 0.0) << "," << t << "\n";
  test::spit(dir / "x.csv", csv.str());
  const auto r = run({"train", "--data", p(dir / "x.csv"), "--out", p(dir / "m"), "--epochs", "2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("epoch") != std::string::npos);
}

TEST_CASE("evaluate reproduces crafted B1 counts") {
  test::TempDir dir("cli_eval");
  write_b1_fixture(dir);
  const auto r = run({"evaluate", "--detections", p(dir / "det.csv"), "--labels",
                      p(dir / "labels.csv"), "--out", p(dir / "o")});
  REQUIRE(r.code == 0);
  const auto m = json::parse(test::slurp(dir / "o" / "metrics.json"));
  CHECK(m["TP"] == 388);
  CHECK(m["FP"] == 5);
  CHECK(m["TN"] == 1677);
  CHECK(m["FN"] == 19);
  const std::pair<const char*, double> expect[] = {{"S", 0.9701}, {"S_TTD", 0.9650}, {"S_CLF", 0.9752},
                                                   {"F1", 0.9700}, {"TPR", 0.9533}, {"TNR", 0.9970},
                                                   {"PPV", 0.9873}};
  for (const auto& [key, v] : expect) {
    CAPTURE(key);
    CHECK(std::abs(m[key].get<double>() - v) <= 1e-4);
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(4);
    s << v;
    CHECK(r.out.find(s.str()) != std::string::npos);
  }
  CHECK(test::slurp(dir / "o" / "metrics.txt") == r.out);
}

TEST_CASE("evaluate fusion and validation") {
  test::TempDir dir("cli_fuse");
  test::spit(dir / "labels.csv", "timestamp,ATT_FLAG\n0,0\n1,1\n2,1\n3,0\n");
  test::spit(dir / "a.csv", "timestamp,raw,smoothed,flag\n0,0,0,0\n1,0,0,1\n2,0,0,1\n3,0,0,0\n");
  test::spit(dir / "b.csv", "timestamp,raw,smoothed,flag\n0,0,0,1\n1,0,0,0\n2,0,0,0\n3,0,0,0\n");
  test::spit(dir / "short.csv", "timestamp,raw,smoothed,flag\n0,0,0,1\n");
  test::spit(dir / "shift.csv", "timestamp,raw,smoothed,flag\n1,0,0,0\n2,0,0,1\n3,0,0,1\n4,0,0,0\n");

  auto eval = [&](std::vector<std::string> dets, const std::string& fuse) {
    std::vector<std::string> args{"evaluate", "--labels", p(dir / "labels.csv"), "--out",
                                  p(dir / ("o_" + fuse)), "--fuse", fuse, "--detections"};
    for (const auto& d : dets) args.push_back(p(dir / d));
    return run(args);
  };
  REQUIRE(eval({"a.csv"}, "or").code == 0);
  CHECK(json::parse(test::slurp(dir / "o_or" / "metrics.json"))["S"] == 1.0);

  REQUIRE(eval({"a.csv", "b.csv"}, "or").code == 0);
  CHECK(json::parse(test::slurp(dir / "o_or" / "metrics.json"))["FP"] == 1);
  REQUIRE(eval({"a.csv", "b.csv"}, "majority").code == 0);
  CHECK(json::parse(test::slurp(dir / "o_majority" / "metrics.json"))["TP"] == 0);

  CHECK(eval({"short.csv"}, "or").code == 1);
  CHECK(eval({"shift.csv"}, "or").code == 1);
  CHECK(eval({"a.csv"}, "xor").code == 1);
}
