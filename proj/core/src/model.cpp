#include "htdc/model.hpp"

#include <string>

#include "htdc/errors.hpp"

namespace htdc {

HTdcAutoencoder::HTdcAutoencoder(Mlp encoder, Mlp decoder, LatentPartition partition)
    : encoder_(std::move(encoder)), decoder_(std::move(decoder)), partition_(partition) {
  if (encoder_.layer_count() == 0 || decoder_.layer_count() == 0) {
    throw ConfigError("autoencoder needs non-empty encoder and decoder");
  }
  if (partition_.width() == 0) throw ConfigError("latent partition is empty");
  if (encoder_.output_size() != partition_.width()) {
    throw DimensionError("encoder output " + std::to_string(encoder_.output_size()) +
                         " != latent width " + std::to_string(partition_.width()));
  }
  if (decoder_.input_size() != partition_.width()) {
    throw DimensionError("decoder input " + std::to_string(decoder_.input_size()) +
                         " != latent width " + std::to_string(partition_.width()));
  }
  if (encoder_.input_size() != decoder_.output_size()) {
    throw DimensionError("encoder input " + std::to_string(encoder_.input_size()) +
                         " != decoder output " + std::to_string(decoder_.output_size()));
  }
}

std::size_t HTdcAutoencoder::parameter_count() const noexcept {
  return encoder_.parameter_count() + decoder_.parameter_count();
}

std::vector<double> HTdcAutoencoder::flat_parameters() const {
  auto out = encoder_.flat_parameters();
  const auto dec = decoder_.flat_parameters();
  out.insert(out.end(), dec.begin(), dec.end());
  return out;
}

void HTdcAutoencoder::assign_flat_parameters(std::span<const double> values) {
  if (values.size() != parameter_count()) {
    throw DimensionError("autoencoder expects " + std::to_string(parameter_count()) +
                         " parameters, got " + std::to_string(values.size()));
  }
  const std::size_t n_enc = encoder_.parameter_count();
  encoder_.assign_flat_parameters(values.first(n_enc));
  decoder_.assign_flat_parameters(values.subspan(n_enc));
}

std::vector<double> ModelGradients::flat() const {
  auto out = encoder.flat();
  const auto dec = decoder.flat();
  out.insert(out.end(), dec.begin(), dec.end());
  return out;
}

LatentSplit split_latent(const Matrix& latent, const LatentPartition& p) {
  if (latent.cols() != p.width()) {
    throw DimensionError("latent has " + std::to_string(latent.cols()) +
                         " columns, partition expects " + std::to_string(p.width()));
  }
  return {latent.col_slice(p.static_begin(), p.n_pairs),
          latent.col_slice(p.derivative_begin(), p.n_pairs),
          latent.col_slice(p.stat_begin(), p.n_stat)};
}

Matrix encode_raw(const HTdcAutoencoder& model, const Matrix& x) {
  return forward(model.encoder(), x).output();
}

LatentSplit encode(const HTdcAutoencoder& model, const Matrix& x) {
  return split_latent(encode_raw(model, x), model.partition());
}

Matrix reconstruct(const HTdcAutoencoder& model, const Matrix& x) {
  return forward(model.decoder(), encode_raw(model, x)).output();
}

Matrix central_difference(const Matrix& z_prev, const Matrix& z_next, double delta_t) {
  if (!(delta_t > 0.0)) throw ConfigError("central_difference: delta_t must be > 0");
  require_same_shape(z_prev, z_next, "central_difference");
  Matrix out(z_prev.rows(), z_prev.cols());
  const auto a = z_prev.data();
  const auto b = z_next.data();
  auto o = out.data();
  const double inv = 1.0 / (2.0 * delta_t);
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = (b[i] - a[i]) * inv;
  return out;
}

double mse(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "mse");
  if (a.empty()) return 0.0;
  const auto x = a.data();
  const auto y = b.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc / static_cast<double>(x.size());
}

double tdc_loss(const Matrix& delta_z, const Matrix& zdot_t) { return mse(delta_z, zdot_t); }

namespace {

void check_batch(const HTdcAutoencoder& model, const TripleBatch& batch) {
  require_same_shape(batch.prev, batch.current, "triple batch (prev vs current)");
  require_same_shape(batch.next, batch.current, "triple batch (next vs current)");
  if (batch.current.cols() != model.feature_count()) {
    throw DimensionError("batch has " + std::to_string(batch.current.cols()) +
                         " features, model expects " + std::to_string(model.feature_count()));
  }
  if (!(batch.delta_t > 0.0)) throw ConfigError("triple batch delta_t must be > 0");
}

}  // namespace

LossBreakdown total_loss(const HTdcAutoencoder& model, const TripleBatch& batch, double alpha) {
  check_batch(model, batch);
  const auto& p = model.partition();
  const Matrix latent_t = encode_raw(model, batch.current);
  const Matrix recon = forward(model.decoder(), latent_t).output();
  const Matrix z_prev = encode_raw(model, batch.prev).col_slice(p.static_begin(), p.n_pairs);
  const Matrix z_next = encode_raw(model, batch.next).col_slice(p.static_begin(), p.n_pairs);

  LossBreakdown out;
  out.rec_loss = mse(recon, batch.current);
  out.tdc_loss = tdc_loss(central_difference(z_prev, z_next, batch.delta_t),
                          latent_t.col_slice(p.derivative_begin(), p.n_pairs));
  out.total = out.rec_loss + alpha * out.tdc_loss;
  return out;
}

LossAndGradients total_loss_with_gradients(const HTdcAutoencoder& model, const TripleBatch& batch,
                                           double alpha) {
  check_batch(model, batch);
  const auto& p = model.partition();
  const std::size_t rows = batch.size();
  const std::size_t features = model.feature_count();

  const ActivationTrace enc_t = forward(model.encoder(), batch.current);
  const ActivationTrace enc_prev = forward(model.encoder(), batch.prev);
  const ActivationTrace enc_next = forward(model.encoder(), batch.next);
  const ActivationTrace dec_t = forward(model.decoder(), enc_t.output());

  const Matrix& latent_t = enc_t.output();
  const Matrix& latent_prev = enc_prev.output();
  const Matrix& latent_next = enc_next.output();
  const Matrix& recon = dec_t.output();

  LossAndGradients out;

  // Reconstruction: d/dX~ of mean((X~ - X)^2) over rows*features.
  Matrix rec_cot(rows, features);
  double rec_acc = 0.0;
  const double rec_scale = 2.0 / static_cast<double>(rows * features);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t f = 0; f < features; ++f) {
      const double d = recon(r, f) - batch.current(r, f);
      rec_acc += d * d;
      rec_cot(r, f) = rec_scale * d;
    }
  }
  out.loss.rec_loss = rec_acc / static_cast<double>(rows * features);

  // TDC residual r = (z_next - z_prev)/(2 dt) - zdot_t, mean over rows*n_pairs.
  Matrix cot_prev(rows, p.width());
  Matrix cot_next(rows, p.width());
  BackwardResult dec_back = backward(model.decoder(), dec_t, rec_cot);
  Matrix cot_t = std::move(dec_back.input_cotangent);

  double tdc_acc = 0.0;
  if (p.n_pairs > 0) {
    const double inv_2dt = 1.0 / (2.0 * batch.delta_t);
    const double tdc_scale = alpha * 2.0 / static_cast<double>(rows * p.n_pairs);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t i = 0; i < p.n_pairs; ++i) {
        const std::size_t zi = p.static_begin() + i;
        const std::size_t di = p.derivative_begin() + i;
        const double dz = (latent_next(r, zi) - latent_prev(r, zi)) * inv_2dt;
        const double res = dz - latent_t(r, di);
        tdc_acc += res * res;
        const double g = tdc_scale * res;
        cot_t(r, di) -= g;
        cot_next(r, zi) += g * inv_2dt;
        cot_prev(r, zi) -= g * inv_2dt;
      }
    }
    out.loss.tdc_loss = tdc_acc / static_cast<double>(rows * p.n_pairs);
  }
  out.loss.total = out.loss.rec_loss + alpha * out.loss.tdc_loss;

  out.gradients.decoder = std::move(dec_back.gradients);
  out.gradients.encoder = backward(model.encoder(), enc_t, cot_t).gradients;
  if (p.n_pairs > 0) {
    out.gradients.encoder += backward(model.encoder(), enc_prev, cot_prev).gradients;
    out.gradients.encoder += backward(model.encoder(), enc_next, cot_next).gradients;
  }
  return out;
}

}  // namespace htdc
