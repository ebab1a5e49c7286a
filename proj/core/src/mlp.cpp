#include "htdc/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "htdc/errors.hpp"

namespace htdc {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Tanh:
      return "tanh";
    case Activation::Identity:
      return "identity";
  }
  return "unknown";
}

Activation activation_from_string(std::string_view name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "identity") return Activation::Identity;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

Mlp::Mlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ConfigError("Mlp needs at least one layer");
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const auto& l = layers_[k];
    if (l.bias.size() != l.out_size()) {
      throw DimensionError("layer " + std::to_string(k) + ": bias length " +
                           std::to_string(l.bias.size()) + " != output size " +
                           std::to_string(l.out_size()));
    }
    if (k > 0 && layers_[k - 1].out_size() != l.in_size()) {
      throw DimensionError("layer " + std::to_string(k) + " expects " +
                           std::to_string(l.in_size()) + " inputs but layer " +
                           std::to_string(k - 1) + " produces " +
                           std::to_string(layers_[k - 1].out_size()));
    }
  }
}

std::size_t Mlp::input_size() const { return layers_.front().in_size(); }
std::size_t Mlp::output_size() const { return layers_.back().out_size(); }

std::size_t Mlp::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
  return n;
}

std::vector<double> Mlp::flat_parameters() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const auto& l : layers_) {
    out.insert(out.end(), l.weights.data().begin(), l.weights.data().end());
    out.insert(out.end(), l.bias.begin(), l.bias.end());
  }
  return out;
}

void Mlp::assign_flat_parameters(std::span<const double> values) {
  if (values.size() != parameter_count()) {
    throw DimensionError("assign_flat_parameters: expected " +
                         std::to_string(parameter_count()) + " values, got " +
                         std::to_string(values.size()));
  }
  auto it = values.begin();
  for (auto& l : layers_) {
    auto w = l.weights.data();
    std::copy(it, it + static_cast<std::ptrdiff_t>(w.size()), w.begin());
    it += static_cast<std::ptrdiff_t>(w.size());
    std::copy(it, it + static_cast<std::ptrdiff_t>(l.bias.size()), l.bias.begin());
    it += static_cast<std::ptrdiff_t>(l.bias.size());
  }
}

Mlp init_mlp(std::span<const std::size_t> layer_sizes,
             std::span<const Activation> activations, std::uint64_t seed) {
  if (layer_sizes.size() < 2) throw ConfigError("init_mlp: need at least two layer sizes");
  if (activations.size() != layer_sizes.size() - 1) {
    throw ConfigError("init_mlp: " + std::to_string(layer_sizes.size() - 1) +
                      " layers but " + std::to_string(activations.size()) + " activations");
  }
  if (std::any_of(layer_sizes.begin(), layer_sizes.end(), [](std::size_t s) { return s == 0; })) {
    throw ConfigError("init_mlp: layer sizes must be positive");
  }

  std::mt19937_64 rng(seed);
  std::vector<DenseLayer> layers;
  layers.reserve(activations.size());
  for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
    const std::size_t fan_in = layer_sizes[k];
    const std::size_t fan_out = layer_sizes[k + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    DenseLayer layer{Matrix(fan_out, fan_in), std::vector<double>(fan_out, 0.0), activations[k]};
    for (double& w : layer.weights.data()) w = dist(rng);
    layers.push_back(std::move(layer));
  }
  return Mlp(std::move(layers));
}

GradientSet GradientSet::zeros_like(const Mlp& mlp) {
  GradientSet g;
  g.layers.reserve(mlp.layer_count());
  for (const auto& l : mlp.layers()) {
    g.layers.push_back({Matrix(l.out_size(), l.in_size()), std::vector<double>(l.out_size(), 0.0)});
  }
  return g;
}

GradientSet& GradientSet::operator+=(const GradientSet& other) {
  if (other.layers.size() != layers.size()) throw DimensionError("GradientSet layer count mismatch");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    require_same_shape(layers[k].weights, other.layers[k].weights, "GradientSet +=");
    auto dst = layers[k].weights.data();
    auto src = other.layers[k].weights.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    for (std::size_t i = 0; i < layers[k].bias.size(); ++i) layers[k].bias[i] += other.layers[k].bias[i];
  }
  return *this;
}

std::vector<double> GradientSet::flat() const {
  std::vector<double> out;
  for (const auto& l : layers) {
    out.insert(out.end(), l.weights.data().begin(), l.weights.data().end());
    out.insert(out.end(), l.bias.begin(), l.bias.end());
  }
  return out;
}

bool GradientSet::all_finite() const noexcept {
  for (const auto& l : layers) {
    if (!l.weights.all_finite()) return false;
    if (!std::all_of(l.bias.begin(), l.bias.end(), [](double v) { return std::isfinite(v); })) {
      return false;
    }
  }
  return true;
}

ActivationTrace forward(const Mlp& mlp, const Matrix& input) {
  if (mlp.layer_count() == 0) throw ConfigError("forward: empty network");
  if (input.cols() != mlp.input_size()) {
    throw DimensionError("forward: input has " + std::to_string(input.cols()) +
                         " columns, network expects " + std::to_string(mlp.input_size()));
  }
  if (input.rows() == 0) throw DimensionError("forward: empty batch");

  ActivationTrace trace;
  trace.input = input;
  trace.layers.reserve(mlp.layer_count());
  const Matrix* x = &trace.input;
  for (const auto& layer : mlp.layers()) {
    const std::size_t batch = x->rows();
    const std::size_t n_in = layer.in_size();
    const std::size_t n_out = layer.out_size();
    LayerTrace lt{Matrix(batch, n_out), Matrix(batch, n_out)};
    for (std::size_t b = 0; b < batch; ++b) {
      const auto xr = x->row(b);
      for (std::size_t o = 0; o < n_out; ++o) {
        const auto wr = layer.weights.row(o);
        double acc = layer.bias[o];
        for (std::size_t i = 0; i < n_in; ++i) acc += wr[i] * xr[i];
        lt.pre(b, o) = acc;
        lt.post(b, o) = layer.activation == Activation::Tanh ? std::tanh(acc) : acc;
      }
    }
    trace.layers.push_back(std::move(lt));
    x = &trace.layers.back().post;
  }
  return trace;
}

BackwardResult backward(const Mlp& mlp, const ActivationTrace& trace,
                        const Matrix& output_cotangent) {
  if (trace.layers.size() != mlp.layer_count()) {
    throw DimensionError("backward: trace does not belong to this network");
  }
  require_same_shape(trace.output(), output_cotangent, "backward: output cotangent");

  BackwardResult result{GradientSet::zeros_like(mlp), Matrix()};
  Matrix cot = output_cotangent;
  for (std::size_t k = mlp.layer_count(); k-- > 0;) {
    const auto& layer = mlp.layer(k);
    const auto& lt = trace.layers[k];
    const Matrix& x = k == 0 ? trace.input : trace.layers[k - 1].post;
    const std::size_t batch = x.rows();
    const std::size_t n_in = layer.in_size();
    const std::size_t n_out = layer.out_size();

    // cotangent of the pre-activation; tanh' = 1 - tanh^2 from the stored output
    Matrix delta = cot;
    if (layer.activation == Activation::Tanh) {
      auto d = delta.data();
      auto y = lt.post.data();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] *= 1.0 - y[i] * y[i];
    }

    auto& g = result.gradients.layers[k];
    Matrix next(batch, n_in);
    for (std::size_t b = 0; b < batch; ++b) {
      const auto xr = x.row(b);
      const auto dr = delta.row(b);
      auto nr = next.row(b);
      for (std::size_t o = 0; o < n_out; ++o) {
        const double d = dr[o];
        if (d == 0.0) continue;
        g.bias[o] += d;
        auto gw = g.weights.row(o);
        const auto wr = layer.weights.row(o);
        for (std::size_t i = 0; i < n_in; ++i) {
          gw[i] += d * xr[i];
          nr[i] += d * wr[i];
        }
      }
    }
    cot = std::move(next);
  }
  result.input_cotangent = std::move(cot);
  return result;
}

}  // namespace htdc
