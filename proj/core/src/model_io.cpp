#include "htdc/model_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "htdc/errors.hpp"

namespace htdc {
namespace {

using json = nlohmann::ordered_json;

json mlp_to_json(const Mlp& mlp) {
  json layers = json::array();
  for (const auto& l : mlp.layers()) {
    layers.push_back({{"in", l.in_size()},
                      {"out", l.out_size()},
                      {"activation", std::string(to_string(l.activation))},
                      {"weights", std::vector<double>(l.weights.data().begin(), l.weights.data().end())},
                      {"bias", l.bias}});
  }
  return {{"layers", layers}};
}

Mlp mlp_from_json(const json& j) {
  std::vector<DenseLayer> layers;
  for (const auto& l : j.at("layers")) {
    const auto in = l.at("in").get<std::size_t>();
    const auto out = l.at("out").get<std::size_t>();
    auto weights = l.at("weights").get<std::vector<double>>();
    layers.push_back({Matrix(out, in, std::move(weights)), l.at("bias").get<std::vector<double>>(),
                      activation_from_string(l.at("activation").get<std::string>())});
  }
  return Mlp(std::move(layers));
}

json config_to_json(const TrainingConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"batch_size", c.batch_size},
          {"alpha", c.alpha},
          {"epochs", c.epochs},
          {"seed", c.seed},
          {"hidden_size", c.hidden_size},
          {"partition", {{"n_pairs", c.partition.n_pairs}, {"n_stat", c.partition.n_stat}}},
          {"delta_t", c.delta_t},
          {"adamax",
           {{"beta1", c.adamax.beta1}, {"beta2", c.adamax.beta2}, {"epsilon", c.adamax.epsilon}}}};
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

TrainingConfig config_from_json(const json& j, TrainingConfig c) {
  read_opt(j, "learning_rate", c.learning_rate);
  read_opt(j, "batch_size", c.batch_size);
  read_opt(j, "alpha", c.alpha);
  read_opt(j, "epochs", c.epochs);
  read_opt(j, "seed", c.seed);
  read_opt(j, "hidden_size", c.hidden_size);
  read_opt(j, "delta_t", c.delta_t);
  if (j.contains("partition")) {
    const auto& p = j.at("partition");
    read_opt(p, "n_pairs", c.partition.n_pairs);
    read_opt(p, "n_stat", c.partition.n_stat);
  }
  if (j.contains("adamax")) {
    const auto& a = j.at("adamax");
    read_opt(a, "beta1", c.adamax.beta1);
    read_opt(a, "beta2", c.adamax.beta2);
    read_opt(a, "epsilon", c.adamax.epsilon);
  }
  return c;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string model_to_json(const ModelBundle& b) {
  const auto& p = b.model.partition();
  json j = {{"format", "htdc-model"},
            {"version", 1},
            {"partition", {{"n_pairs", p.n_pairs}, {"n_stat", p.n_stat}}},
            {"features", b.features},
            {"encoder", mlp_to_json(b.model.encoder())},
            {"decoder", mlp_to_json(b.model.decoder())},
            {"scaler", json::parse(scaler_to_json(b.scaler))}};
  if (b.config) j["config"] = config_to_json(*b.config);
  j["calibration"] = {{"raw_scores", b.calibration_scores}};
  return j.dump(1);
}

ModelBundle model_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "htdc-model") throw ConfigError("not an htdc model document");
    ModelBundle b;
    const auto& pj = j.at("partition");
    const LatentPartition part{pj.at("n_pairs").get<std::size_t>(),
                               pj.at("n_stat").get<std::size_t>()};
    b.model = HTdcAutoencoder(mlp_from_json(j.at("encoder")), mlp_from_json(j.at("decoder")), part);
    b.features = j.at("features").get<std::vector<std::string>>();
    if (b.features.size() != b.model.feature_count()) {
      throw DimensionError("model lists " + std::to_string(b.features.size()) +
                           " features but its encoder takes " +
                           std::to_string(b.model.feature_count()));
    }
    b.scaler = scaler_from_json(j.at("scaler").dump());
    if (j.contains("config")) b.config = config_from_json(j.at("config"), TrainingConfig{});
    if (j.contains("calibration")) {
      b.calibration_scores = j.at("calibration").at("raw_scores").get<std::vector<double>>();
    }
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid model JSON: ") + e.what());
  }
}

void save_model(const ModelBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << model_to_json(bundle) << '\n';
}

ModelBundle load_model(const std::filesystem::path& path) {
  return model_from_json(read_file(path));
}

std::string training_config_to_json(const TrainingConfig& config) {
  return config_to_json(config).dump(2);
}

TrainingConfig training_config_from_json(std::string_view text, TrainingConfig base) {
  try {
    TrainingConfig c = config_from_json(json::parse(text), base);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid training config JSON: ") + e.what());
  }
}

}  // namespace htdc
