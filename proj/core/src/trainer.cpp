#include "htdc/trainer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "htdc/errors.hpp"
#include "htdc/triples.hpp"

namespace htdc {

void TrainingConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
  if (epochs == 0) throw ConfigError("epochs must be >= 1");
  if (hidden_size == 0) throw ConfigError("hidden_size must be >= 1");
  if (partition.width() == 0) throw ConfigError("latent partition is empty");
  if (!(delta_t > 0.0)) throw ConfigError("delta_t must be > 0");
}

TrainingConfig default_training_config(EdgeId edge) {
  TrainingConfig c;
  switch (edge) {
    case EdgeId::Edge1:
      c.hidden_size = 9;
      c.partition = {3, 1};
      c.learning_rate = 0.01;
      c.alpha = 0.002;
      break;
    case EdgeId::Edge2:
      c.hidden_size = 19;
      c.partition = {3, 2};
      c.learning_rate = 0.007;
      c.alpha = 0.003;
      break;
    case EdgeId::Edge3:
      c.hidden_size = 15;
      c.partition = {3, 2};
      c.learning_rate = 0.01;
      c.alpha = 0.002;
      break;
  }
  return c;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

HTdcAutoencoder init_autoencoder(const TrainingConfig& config, std::size_t feature_count) {
  config.validate();
  if (feature_count == 0) throw ConfigError("init_autoencoder: no features");
  const std::size_t latent = config.partition.width();
  const std::array<std::size_t, 3> enc_sizes{feature_count, config.hidden_size, latent};
  const std::array<std::size_t, 3> dec_sizes{latent, config.hidden_size, feature_count};
  const std::array<Activation, 2> enc_act{Activation::Tanh, Activation::Tanh};
  const std::array<Activation, 2> dec_act{Activation::Tanh, Activation::Identity};
  return HTdcAutoencoder(init_mlp(enc_sizes, enc_act, derive_seed(config.seed, 0)),
                         init_mlp(dec_sizes, dec_act, derive_seed(config.seed, 1)),
                         config.partition);
}

TripleShuffler::TripleShuffler(std::uint64_t seed) : rng_(seed) {}

std::vector<std::size_t> TripleShuffler::next_epoch(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng_);
  return order;
}

TrainingResult train(const TrainingConfig& config, const DatasetFrame& train_frame,
                     const EpochCallback& on_epoch) {
  config.validate();
  const TripleBatch all = make_triples(train_frame, config.delta_t);

  TrainingResult result{init_autoencoder(config, train_frame.feature_count()), {}};
  HTdcAutoencoder& model = result.model;
  AdamaxState enc_state = make_adamax_state(model.encoder(), config.adamax);
  AdamaxState dec_state = make_adamax_state(model.decoder(), config.adamax);
  TripleShuffler shuffler(derive_seed(config.seed, 2));

  const std::size_t n = all.size();
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto order = shuffler.next_epoch(n);
    LossBreakdown sum;
    std::size_t batch_no = 0;
    for (std::size_t begin = 0; begin < n; begin += config.batch_size, ++batch_no) {
      const std::size_t count = std::min(config.batch_size, n - begin);
      const std::span<const std::size_t> idx(order.data() + begin, count);
      const TripleBatch batch{all.prev.gather_rows(idx), all.current.gather_rows(idx),
                              all.next.gather_rows(idx), config.delta_t};

      const auto lg = total_loss_with_gradients(model, batch, config.alpha);
      if (!std::isfinite(lg.loss.total) || !lg.gradients.all_finite()) {
        throw NumericError("non-finite loss or gradient at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(batch_no));
      }
      adamax_step(model.encoder(), lg.gradients.encoder, enc_state, config.learning_rate);
      adamax_step(model.decoder(), lg.gradients.decoder, dec_state, config.learning_rate);

      const auto w = static_cast<double>(count);
      sum.rec_loss += w * lg.loss.rec_loss;
      sum.tdc_loss += w * lg.loss.tdc_loss;
    }
    LossBreakdown mean;
    mean.rec_loss = sum.rec_loss / static_cast<double>(n);
    mean.tdc_loss = sum.tdc_loss / static_cast<double>(n);
    mean.total = mean.rec_loss + config.alpha * mean.tdc_loss;
    result.history.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
  }
  return result;
}

}  // namespace htdc
