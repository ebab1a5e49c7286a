#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "htdc/adamax.hpp"
#include "htdc/dataset.hpp"
#include "htdc/edges.hpp"
#include "htdc/model.hpp"

namespace htdc {

struct TrainingConfig {
  double learning_rate = 0.01;
  std::size_t batch_size = 32;
  double alpha = 0.002;
  std::size_t epochs = 40;
  std::uint64_t seed = 0;
  std::size_t hidden_size = 9;
  LatentPartition partition{3, 1};
  double delta_t = 1.0;
  AdamaxHyper adamax;

  /// ConfigError on alpha < 0, epochs == 0, batch_size == 0, lr <= 0,
  /// delta_t <= 0, hidden_size == 0, or an empty partition.
  void validate() const;

  friend bool operator==(const TrainingConfig&, const TrainingConfig&) = default;
};

/// Per-edge hyperparameters used for the BATADAL areas.
///   edge 1: hidden 9,  latent (3-3, 1), lr 0.01,  alpha 0.002
///   edge 2: hidden 19, latent (3-3, 2), lr 0.007, alpha 0.003
///   edge 3: hidden 15, latent (3-3, 2), lr 0.01,  alpha 0.002
/// Adamax, tanh, batch 32, 40 epochs for all three.
TrainingConfig default_training_config(EdgeId edge);

/// Encoder: features -> hidden (tanh) -> latent (tanh).
/// Decoder: latent -> hidden (tanh) -> features (identity).
HTdcAutoencoder init_autoencoder(const TrainingConfig& config, std::size_t feature_count);

/// Seeded per-epoch permutation of triple indices.
class TripleShuffler {
 public:
  explicit TripleShuffler(std::uint64_t seed);
  std::vector<std::size_t> next_epoch(std::size_t n);

 private:
  std::mt19937_64 rng_;
};

/// Independent stream seeds derived from one run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct TrainingResult {
  HTdcAutoencoder model;
  /// One entry per epoch: size-weighted mean of the per-batch losses
  /// evaluated before each parameter update.
  std::vector<LossBreakdown> history;
};

using EpochCallback = std::function<void(std::size_t epoch, const LossBreakdown&)>;

/// Trains on a scaled, attack-free frame (labels ignored). Throws
/// NumericError naming the epoch and batch if a loss or gradient is non-finite.
TrainingResult train(const TrainingConfig& config, const DatasetFrame& train_frame,
                     const EpochCallback& on_epoch = {});

}  // namespace htdc
