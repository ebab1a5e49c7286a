#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "htdc/csv.hpp"
#include "htdc/detect.hpp"
#include "htdc/edges.hpp"
#include "htdc/errors.hpp"
#include "htdc/metrics.hpp"
#include "htdc/model_io.hpp"
#include "htdc/percentile.hpp"
#include "htdc/report.hpp"
#include "htdc/scaler.hpp"
#include "htdc/synth.hpp"
#include "htdc/trainer.hpp"

namespace htdc::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr const char* kSeedEnv = "HTDC_SEED";

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
  return p;
}

/// Seed precedence: explicit --seed, then $HTDC_SEED, then the config file/default.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kSeedEnv); env && *env) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(env, &pos);
      if (pos != std::string(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(std::string(kSeedEnv) + " is not an unsigned integer: '" + env + "'");
    }
  }
  return fallback;
}

/// Appends lines to <out>/run.log and echoes them to the console.
class RunLog {
 public:
  RunLog(const fs::path& dir, std::ostream& console)
      : file_(dir / "run.log", std::ios::binary), console_(console) {}
  void line(const std::string& msg) {
    file_ << msg << '\n';
    console_ << msg << '\n';
  }

 private:
  std::ofstream file_;
  std::ostream& console_;
};

// ---------------------------------------------------------------- synth

struct SynthOptions {
  std::string config;
  std::string out = "synth_out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> horizon;
  bool no_attacks = false;
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  TankSystemConfig sys;
  std::vector<AttackScenario> attacks = default_attack_scenarios();
  bool default_attacks = true;
  if (!o.config.empty()) {
    const std::string text = read_text(o.config);
    synth_config_from_json(text, sys, attacks);
    default_attacks = !json::parse(text).contains("attacks");
  }
  sys.seed = resolve_seed(o.seed, sys.seed);
  if (o.horizon) sys.horizon = *o.horizon;
  if (o.no_attacks) attacks.clear();

  // Built-in scenarios are laid out for the default horizon; drop those a shorter run cannot hold.
  std::size_t dropped = 0;
  if (default_attacks) {
    dropped = static_cast<std::size_t>(std::erase_if(
        attacks, [&](const AttackScenario& a) { return a.interval.end >= sys.horizon; }));
  }

  const DatasetFrame frame = simulate(sys, attacks);
  const fs::path dir = prepare_out_dir(o.out);
  RunLog log(dir, out);
  if (dropped > 0) {
    log.line("note: " + std::to_string(dropped) + " built-in attack(s) do not fit horizon " +
             std::to_string(sys.horizon) + " and were dropped");
  }
  write_text(dir / "config.json", synth_config_to_json(sys, attacks) + "\n");
  write_csv(frame, dir / "data.csv");

  DatasetFrame labels;
  labels.timestamps = frame.timestamps;
  labels.values = Matrix(frame.rows(), 0);
  labels.labels = frame.labels;
  write_csv(labels, dir / "labels.csv");

  log.line("synth: " + std::to_string(frame.rows()) + " rows, " +
           std::to_string(frame.feature_count()) + " features, " +
           std::to_string(attacks.size()) + " attacks, seed " + std::to_string(sys.seed));
  log.line("wrote " + (dir / "data.csv").string());
  return kSuccess;
}

// ---------------------------------------------------------------- train

struct TrainOptions {
  std::string data;
  std::string out = "train_out";
  std::string edge = "all";
  std::string config;
  std::optional<double> alpha;
  std::optional<double> lr;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> batch;
  std::optional<std::size_t> hidden;
  std::optional<std::size_t> pairs;
  std::optional<std::size_t> stat;
  std::optional<std::uint64_t> seed;
};

DatasetFrame select_edge(const DatasetFrame& frame, const std::string& edge) {
  if (edge == "all") return frame;
  return frame.select(edge_segment(edge_from_int(std::stoi(edge))).feature_names);
}

TrainingConfig base_config_for(const std::string& edge) {
  if (edge == "all") return default_training_config(EdgeId::Edge1);
  if (edge != "1" && edge != "2" && edge != "3") {
    throw ConfigError("--edge must be 1, 2, 3, or all (got '" + edge + "')");
  }
  return default_training_config(edge_from_int(std::stoi(edge)));
}

int cmd_train(const TrainOptions& o, std::ostream& out) {
  TrainingConfig cfg = base_config_for(o.edge);
  if (!o.config.empty()) cfg = training_config_from_json(read_text(o.config), cfg);
  if (o.alpha) cfg.alpha = *o.alpha;
  if (o.lr) cfg.learning_rate = *o.lr;
  if (o.epochs) cfg.epochs = *o.epochs;
  if (o.batch) cfg.batch_size = *o.batch;
  if (o.hidden) cfg.hidden_size = *o.hidden;
  if (o.pairs) cfg.partition.n_pairs = *o.pairs;
  if (o.stat) cfg.partition.n_stat = *o.stat;
  cfg.seed = resolve_seed(o.seed, cfg.seed);
  cfg.validate();

  const DatasetFrame raw = select_edge(load_csv(o.data), o.edge);
  const fs::path dir = prepare_out_dir(o.out);
  RunLog log(dir, out);

  json echo = {{"command", "train"},
               {"data", o.data},
               {"edge", o.edge},
               {"features", raw.feature_names},
               {"training", json::parse(training_config_to_json(cfg))}};
  write_text(dir / "config.json", echo.dump(2) + "\n");

  if (raw.labels && std::find(raw.labels->begin(), raw.labels->end(), 1) != raw.labels->end()) {
    log.line("warning: training data carries attack labels; labels are ignored");
  }

  const RobustScalerParams scaler = fit_scaler(raw);
  const DatasetFrame scaled = apply_scaler(scaler, raw);
  log.line("train: " + std::to_string(scaled.rows()) + " rows, " +
           std::to_string(scaled.feature_count()) + " features, edge " + o.edge + ", seed " +
           std::to_string(cfg.seed));

  std::ofstream history(dir / "loss_history.csv", std::ios::binary);
  history << "epoch,rec_loss,tdc_loss,total\n";
  const TrainingResult result =
      train(cfg, scaled, [&](std::size_t epoch, const LossBreakdown& l) {
        history << epoch << ',' << format_number(l.rec_loss) << ',' << format_number(l.tdc_loss)
                << ',' << format_number(l.total) << '\n';
        log.line("epoch " + std::to_string(epoch) + ": rec " + format_number(l.rec_loss) +
                 " tdc " + format_number(l.tdc_loss) + " total " + format_number(l.total));
      });
  history.close();

  ModelBundle bundle{result.model, scaler, scaled.feature_names, cfg,
                     reconstruction_error(result.model, scaled)};
  save_model(bundle, dir / "model.json");
  write_text(dir / "scaler.json", scaler_to_json(scaler) + "\n");
  log.line("wrote " + (dir / "model.json").string());
  return kSuccess;
}

// ---------------------------------------------------------------- detect

struct DetectOptions {
  std::string model;
  std::string data;
  std::string out = "detect_out";
  std::string train;
  std::size_t window = 7;
  double percentile = 95.0;
  std::optional<double> threshold;
  std::string smoothing = "trailing";
  std::string basis = "smoothed";
};

DatasetFrame prepare_frame(const ModelBundle& bundle, const std::string& path) {
  return apply_scaler(bundle.scaler, load_csv(path).select(bundle.features));
}

int cmd_detect(const DetectOptions& o, std::ostream& out) {
  DetectionConfig dc;
  dc.window = o.window;
  dc.percentile = o.percentile;
  dc.threshold_override = o.threshold;
  if (o.smoothing == "trailing") {
    dc.smoothing = SmoothingMode::Trailing;
  } else if (o.smoothing == "centered") {
    dc.smoothing = SmoothingMode::Centered;
  } else {
    throw ConfigError("--smoothing must be trailing or centered");
  }
  if (o.basis == "smoothed") {
    dc.basis = ThresholdBasis::Smoothed;
  } else if (o.basis == "raw") {
    dc.basis = ThresholdBasis::Raw;
  } else {
    throw ConfigError("--threshold-basis must be smoothed or raw");
  }
  dc.validate();

  const ModelBundle bundle = load_model(o.model);
  const DatasetFrame frame = prepare_frame(bundle, o.data);

  std::string threshold_source;
  double threshold = 0.0;
  if (dc.threshold_override) {
    threshold = *dc.threshold_override;
    threshold_source = "override";
  } else if (!o.train.empty()) {
    threshold = fit_threshold(bundle.model, prepare_frame(bundle, o.train), dc);
    threshold_source = "train:" + o.train;
  } else {
    if (bundle.calibration_scores.empty()) {
      throw ConfigError("model carries no calibration scores; pass --train or --threshold");
    }
    threshold = fit_threshold_from_scores(bundle.calibration_scores, dc);
    threshold_source = "model calibration scores";
  }

  const DetectionResult result = detect(bundle.model, frame, threshold, dc);
  const fs::path dir = prepare_out_dir(o.out);
  RunLog log(dir, out);

  json echo = {{"command", "detect"},
               {"model", o.model},
               {"data", o.data},
               {"window", dc.window},
               {"percentile", dc.percentile},
               {"smoothing", o.smoothing},
               {"threshold_basis", o.basis},
               {"threshold_source", threshold_source}};
  if (o.threshold) echo["threshold_override"] = *o.threshold;
  if (!o.train.empty()) echo["train"] = o.train;
  write_text(dir / "config.json", echo.dump(2) + "\n");

  write_detection_csv(result, dir / "detection.csv");
  const std::vector<int>* labels = frame.labels ? &*frame.labels : nullptr;
  write_text(dir / "detection.svg",
             detection_svg(result, labels, "reconstruction error, window " + std::to_string(dc.window)));
  json summary = {{"threshold", result.threshold},
                  {"rows", result.size()},
                  {"flags", result.flag_count()}};
  write_text(dir / "detect.json", summary.dump(2) + "\n");

  log.line("detect: threshold " + format_number(threshold) + " (" + threshold_source + "), " +
           std::to_string(result.flag_count()) + "/" + std::to_string(result.size()) +
           " timesteps flagged");
  if (frame.labels) {
    const auto rep = evaluate(result.flags, *frame.labels);
    log.line(metrics_table(rep, "detect"));
  }
  return kSuccess;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
  std::vector<std::string> detections;
  std::string labels;
  std::string fuse = "or";
  std::string out;
};

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
  const FuseRule rule = fuse_rule_from_string(o.fuse);
  std::vector<DetectionResult> results;
  for (const auto& path : o.detections) results.push_back(read_detection_csv(path));
  const DatasetFrame labels = load_csv(o.labels);
  if (!labels.labels) throw IngestionError("'" + o.labels + "' has no ATT_FLAG column");
  for (std::size_t k = 0; k < results.size(); ++k) {
    if (results[k].size() != labels.rows()) {
      throw ConfigError("'" + o.detections[k] + "' has " + std::to_string(results[k].size()) +
                        " rows but the labels have " + std::to_string(labels.rows()));
    }
    if (results[k].timestamps != labels.timestamps) {
      throw ConfigError("'" + o.detections[k] + "' timestamps do not match the labels");
    }
  }

  const std::vector<bool> fused = fuse_edges(results, rule);
  const MetricsReport report = evaluate(fused, *labels.labels);
  const std::string table = metrics_table(report, o.fuse == "or" ? "fused-or" : "fused-maj");
  out << table;
  if (!o.out.empty()) {
    const fs::path dir = prepare_out_dir(o.out);
    json echo = {{"command", "evaluate"},
                 {"detections", o.detections},
                 {"labels", o.labels},
                 {"fuse", o.fuse}};
    write_text(dir / "config.json", echo.dump(2) + "\n");
    write_text(dir / "metrics.json", metrics_to_json(report) + "\n");
    write_text(dir / "metrics.txt", table);
  }
  return kSuccess;
}

// ---------------------------------------------------------------- report

struct ReportOptions {
  std::string model;
  std::string data;
  std::string out = "report_out";
  std::size_t smooth = 1;
};

int cmd_report(const ReportOptions& o, std::ostream& out) {
  if (o.smooth == 0) throw ConfigError("--smooth must be >= 1");
  const ModelBundle bundle = load_model(o.model);
  const DatasetFrame frame = prepare_frame(bundle, o.data);
  const double delta_t = bundle.config ? bundle.config->delta_t : 1.0;
  const LatentTrace trace = latent_trace(bundle.model, frame, delta_t);
  const auto overlays = feature_overlays(trace, frame);

  const fs::path dir = prepare_out_dir(o.out);
  RunLog log(dir, out);
  json echo = {{"command", "report"}, {"model", o.model}, {"data", o.data}, {"smooth", o.smooth},
               {"delta_t", delta_t}};
  write_text(dir / "config.json", echo.dump(2) + "\n");

  {
    std::ofstream csv(dir / "latent_trace.csv", std::ios::binary);
    write_latent_csv(trace, csv);
  }
  write_text(dir / "latent_nodes.svg", latent_nodes_svg(trace, o.smooth));
  for (std::size_t i = 0; i < trace.partition.n_pairs; ++i) {
    write_text(dir / ("pair_" + std::to_string(i + 1) + ".svg"), pair_svg(trace, i, o.smooth));
  }
  json ov = json::array();
  for (const auto& f : overlays) {
    write_text(dir / ("overlay_" + f.node + ".svg"), overlay_svg(trace, frame, f));
    ov.push_back({{"node", f.node},
                  {"feature", f.feature},
                  {"correlation", f.correlation},
                  {"scale", f.scale},
                  {"offset", f.offset}});
  }
  write_text(dir / "overlays.json", ov.dump(2) + "\n");
  log.line("report: " + std::to_string(trace.partition.width()) + " latent nodes over " +
           std::to_string(frame.rows()) + " rows");
  return kSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"htdc: hybrid temporal-differential-consistency autoencoder for anomaly detection"};
  app.require_subcommand(1);

  SynthOptions so;
  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic tank-network dataset");
  synth->add_option("--config", so.config, "Synth config JSON");
  synth->add_option("--out", so.out, "Output directory");
  synth->add_option("--seed", so.seed, "Random seed (overrides $HTDC_SEED and config)");
  synth->add_option("--horizon", so.horizon, "Number of hourly steps");
  synth->add_flag("--no-attacks", so.no_attacks, "Generate attack-free data");

  TrainOptions to;
  auto* trn = app.add_subcommand("train", "Train an autoencoder on attack-free data (alias: fit)");
  trn->alias("fit");
  trn->add_option("--data", to.data, "Training CSV")->required();
  trn->add_option("--out", to.out, "Output directory");
  trn->add_option("--edge", to.edge, "Edge area 1|2|3 (BATADAL columns) or all (every column)");
  trn->add_option("--config", to.config, "Training config JSON");
  trn->add_option("--alpha", to.alpha, "Weight of the TDC loss term");
  trn->add_option("--lr", to.lr, "Adamax learning rate");
  trn->add_option("--epochs", to.epochs, "Training epochs");
  trn->add_option("--batch", to.batch, "Batch size");
  trn->add_option("--hidden", to.hidden, "Hidden layer width");
  trn->add_option("--pairs", to.pairs, "Static/derivative latent node pairs");
  trn->add_option("--stat", to.stat, "Statistical latent nodes");
  trn->add_option("--seed", to.seed, "Random seed (overrides $HTDC_SEED and config)");

  DetectOptions dop;
  auto* det = app.add_subcommand("detect", "Score data and flag anomalies");
  det->add_option("--model", dop.model, "Model JSON from train")->required();
  det->add_option("--data", dop.data, "CSV to score")->required();
  det->add_option("--out", dop.out, "Output directory");
  det->add_option("--train", dop.train, "Attack-free CSV to fit the threshold on");
  det->add_option("--window", dop.window, "Moving-average window");
  det->add_option("--percentile", dop.percentile, "Threshold percentile of training scores");
  det->add_option("--threshold", dop.threshold, "Fixed threshold (skips fitting)");
  det->add_option("--smoothing", dop.smoothing, "trailing|centered");
  det->add_option("--threshold-basis", dop.basis, "smoothed|raw training scores");

  EvaluateOptions eo;
  auto* ev = app.add_subcommand("evaluate", "Fuse per-edge detections and compute scores");
  ev->add_option("--detections", eo.detections, "Detection CSVs, one per edge")->required();
  ev->add_option("--labels", eo.labels, "CSV with an ATT_FLAG column")->required();
  ev->add_option("--fuse", eo.fuse, "or|majority");
  ev->add_option("--out", eo.out, "Output directory for metrics.json/metrics.txt");

  ReportOptions ro;
  auto* rep = app.add_subcommand("report", "Latent-node traces and feature overlays");
  rep->add_option("--model", ro.model, "Model JSON from train")->required();
  rep->add_option("--data", ro.data, "CSV to encode")->required();
  rep->add_option("--out", ro.out, "Output directory");
  rep->add_option("--smooth", ro.smooth, "Trailing smoothing window for the plots");

  std::vector<std::string> argv_storage{"htdc"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUserError;
  }

  try {
    if (*synth) return cmd_synth(so, out);
    if (*trn) return cmd_train(to, out);
    if (*det) return cmd_detect(dop, out);
    if (*ev) return cmd_evaluate(eo, out);
    if (*rep) return cmd_report(ro, out);
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kInternalError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUserError;
  } catch (const std::invalid_argument& e) {
    err << "error: invalid argument: " << e.what() << '\n';
    return kUserError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUserError;
}

}  // namespace htdc::cli
