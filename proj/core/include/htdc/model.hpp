#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "htdc/matrix.hpp"
#include "htdc/mlp.hpp"
#include "htdc/triples.hpp"

namespace htdc {

/// Latent layout: [0, n_pairs) static nodes z, [n_pairs, 2 n_pairs) their
/// derivative nodes zdot (zdot_i pairs with z_i), then n_stat statistical nodes s.
struct LatentPartition {
  std::size_t n_pairs = 0;
  std::size_t n_stat = 0;

  std::size_t width() const noexcept { return 2 * n_pairs + n_stat; }
  std::size_t static_begin() const noexcept { return 0; }
  std::size_t derivative_begin() const noexcept { return n_pairs; }
  std::size_t stat_begin() const noexcept { return 2 * n_pairs; }

  friend bool operator==(const LatentPartition&, const LatentPartition&) = default;
};

/// Encoder/decoder pair sharing a partitioned latent space.
class HTdcAutoencoder {
 public:
  HTdcAutoencoder() = default;
  /// Throws DimensionError unless encoder output = decoder input = partition
  /// width and encoder input = decoder output.
  HTdcAutoencoder(Mlp encoder, Mlp decoder, LatentPartition partition);

  const Mlp& encoder() const noexcept { return encoder_; }
  const Mlp& decoder() const noexcept { return decoder_; }
  Mlp& encoder() noexcept { return encoder_; }
  Mlp& decoder() noexcept { return decoder_; }
  const LatentPartition& partition() const noexcept { return partition_; }
  std::size_t feature_count() const { return encoder_.input_size(); }

  std::size_t parameter_count() const noexcept;
  /// Encoder parameters followed by decoder parameters.
  std::vector<double> flat_parameters() const;
  void assign_flat_parameters(std::span<const double> values);

  friend bool operator==(const HTdcAutoencoder&, const HTdcAutoencoder&) = default;

 private:
  Mlp encoder_;
  Mlp decoder_;
  LatentPartition partition_;
};

struct LatentSplit {
  Matrix z;
  Matrix zdot;
  Matrix s;
};

LatentSplit split_latent(const Matrix& latent, const LatentPartition& partition);
LatentSplit encode(const HTdcAutoencoder& model, const Matrix& x);
Matrix encode_raw(const HTdcAutoencoder& model, const Matrix& x);
Matrix reconstruct(const HTdcAutoencoder& model, const Matrix& x);

/// (z_next - z_prev) / (2 delta_t), elementwise.
Matrix central_difference(const Matrix& z_prev, const Matrix& z_next, double delta_t);

/// Mean of squared elementwise differences over every entry; 0 for empty input.
double mse(const Matrix& a, const Matrix& b);

double tdc_loss(const Matrix& delta_z, const Matrix& zdot_t);

struct LossBreakdown {
  double rec_loss = 0.0;
  double tdc_loss = 0.0;
  double total = 0.0;
};

struct ModelGradients {
  GradientSet encoder;
  GradientSet decoder;

  std::vector<double> flat() const;
  bool all_finite() const noexcept { return encoder.all_finite() && decoder.all_finite(); }
};

struct LossAndGradients {
  LossBreakdown loss;
  ModelGradients gradients;
};

/// total = MSE(decode(encode(X_t)), X_t) + alpha * MSE(central_difference(z_{t-1}, z_{t+1}), zdot_t)
LossBreakdown total_loss(const HTdcAutoencoder& model, const TripleBatch& batch, double alpha);

/// Same value plus exact gradients. The TDC term contributes through all
/// three encoder passes (t-1, t, t+1); the reconstruction term through the
/// encoder and decoder at t.
LossAndGradients total_loss_with_gradients(const HTdcAutoencoder& model, const TripleBatch& batch,
                                           double alpha);

}  // namespace htdc
