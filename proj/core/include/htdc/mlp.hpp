#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "htdc/matrix.hpp"

namespace htdc {

enum class Activation { Tanh, Identity };

std::string_view to_string(Activation a);
/// Accepts "tanh" or "identity"; throws ConfigError otherwise.
Activation activation_from_string(std::string_view name);

/// Affine map followed by an elementwise activation. weights is (out x in).
struct DenseLayer {
  Matrix weights;
  std::vector<double> bias;
  Activation activation = Activation::Tanh;

  std::size_t in_size() const noexcept { return weights.cols(); }
  std::size_t out_size() const noexcept { return weights.rows(); }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Feed-forward stack of dense layers. Construction validates that
/// consecutive layers are shape compatible; afterwards only parameter
/// values can change, never shapes.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<DenseLayer> layers);

  std::size_t layer_count() const noexcept { return layers_.size(); }
  const DenseLayer& layer(std::size_t i) const { return layers_.at(i); }
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }

  std::span<double> weights(std::size_t i) { return layers_.at(i).weights.data(); }
  std::span<double> bias(std::size_t i) { return layers_.at(i).bias; }

  std::size_t input_size() const;
  std::size_t output_size() const;
  std::size_t parameter_count() const noexcept;

  /// Parameters in layer order, weights (row-major) then bias per layer.
  std::vector<double> flat_parameters() const;
  void assign_flat_parameters(std::span<const double> values);

  friend bool operator==(const Mlp&, const Mlp&) = default;

 private:
  std::vector<DenseLayer> layers_;
};

/// Glorot-uniform weights in [-sqrt(6/(fan_in+fan_out)), +...], zero biases.
/// layer_sizes holds n+1 widths for n layers; activations holds n entries.
Mlp init_mlp(std::span<const std::size_t> layer_sizes,
             std::span<const Activation> activations, std::uint64_t seed);

struct LayerTrace {
  Matrix pre;   // affine output, batch x out
  Matrix post;  // activation(pre)
};

/// Everything forward() computed that backward() needs.
struct ActivationTrace {
  Matrix input;
  std::vector<LayerTrace> layers;

  const Matrix& output() const { return layers.back().post; }
};

struct LayerGradient {
  Matrix weights;
  std::vector<double> bias;
};

/// Gradients shape-matched to one Mlp.
struct GradientSet {
  std::vector<LayerGradient> layers;

  static GradientSet zeros_like(const Mlp& mlp);
  GradientSet& operator+=(const GradientSet& other);
  std::vector<double> flat() const;
  bool all_finite() const noexcept;
};

struct BackwardResult {
  GradientSet gradients;
  Matrix input_cotangent;
};

/// Rows of input are samples.
ActivationTrace forward(const Mlp& mlp, const Matrix& input);

/// Reverse-mode pass: given dLoss/dOutput returns dLoss/dParameters and dLoss/dInput.
BackwardResult backward(const Mlp& mlp, const ActivationTrace& trace,
                        const Matrix& output_cotangent);

}  // namespace htdc
