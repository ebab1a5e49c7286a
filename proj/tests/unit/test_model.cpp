#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "htdc/errors.hpp"
#include "htdc/model.hpp"
#include "htdc/trainer.hpp"

using namespace htdc;

namespace {

HTdcAutoencoder edge1_model(std::uint64_t seed, std::size_t features = 9) {
  TrainingConfig cfg = default_training_config(EdgeId::Edge1);
  cfg.seed = seed;
  return init_autoencoder(cfg, features);
}

TripleBatch random_batch(std::size_t rows, std::size_t cols, std::uint64_t seed, double dt = 1.0) {
  return {test::random_matrix(rows, cols, seed), test::random_matrix(rows, cols, seed + 1),
          test::random_matrix(rows, cols, seed + 2), dt};
}

}  // namespace

TEST_CASE("encode splits the latent layout") {
  const auto model = edge1_model(1);
  CHECK(model.partition().width() == 7);
  const Matrix x = test::random_matrix(5, 9, 2);
  const auto parts = encode(model, x);
  CHECK(parts.z.cols() == 3);
  CHECK(parts.zdot.cols() == 3);
  CHECK(parts.s.cols() == 1);
  const Matrix raw = encode_raw(model, x);
  CHECK(hconcat({&parts.z, &parts.zdot, &parts.s}) == raw);
  CHECK_THROWS_AS(encode(model, Matrix(2, 8)), DimensionError);
}

TEST_CASE("zero-weight encoder gives zero latents") {
  auto model = edge1_model(1);
  auto p = model.flat_parameters();
  const std::size_t enc = model.encoder().parameter_count();
  std::fill(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(enc), 0.0);
  model.assign_flat_parameters(p);
  const auto parts = encode(model, test::random_matrix(3, 9, 5));
  for (const Matrix* m : {&parts.z, &parts.zdot, &parts.s}) {
    for (double v : m->data()) CHECK(v == 0.0);
  }
}

TEST_CASE("autoencoder construction validates the partition") {
  const auto m = edge1_model(1);
  CHECK_THROWS_AS(HTdcAutoencoder(m.encoder(), m.decoder(), LatentPartition{3, 2}), DimensionError);
  CHECK_THROWS_AS(HTdcAutoencoder(m.decoder(), m.encoder(), m.partition()), DimensionError);
}

TEST_CASE("central difference examples") {
  // f(t) = t^2 at t = 1, 3
  const auto d = central_difference(Matrix::from_rows({{1.0}}), Matrix::from_rows({{9.0}}), 1.0);
  CHECK(d(0, 0) == 4.0);
  const Matrix same = test::random_matrix(2, 3, 1);
  const Matrix zero = central_difference(same, same, 0.5);
  for (double v : zero.data()) CHECK(v == 0.0);
  const auto s = central_difference(Matrix::from_rows({{std::sin(-0.1)}}),
                                    Matrix::from_rows({{std::sin(0.1)}}), 0.1);
  CHECK(s(0, 0) == doctest::Approx(0.9983341664682815).epsilon(1e-14));
  CHECK_THROWS_AS(central_difference(same, same, 0.0), ConfigError);
  CHECK_THROWS_AS(central_difference(same, same, -1.0), ConfigError);
  CHECK_THROWS_AS(central_difference(same, Matrix(2, 2), 1.0), DimensionError);
}

TEST_CASE("central difference is exact on quadratics across scales") {
  for (double dt : {1.0, 0.5, 0.25, 0.125}) {
    for (double t : {-3.0, 0.0, 1.5, 7.0}) {
      const double a = 0.75, b = -2.0, c = 4.0;
      auto f = [&](double u) { return a * u * u + b * u + c; };
      const auto d = central_difference(Matrix::from_rows({{f(t - dt)}}),
                                        Matrix::from_rows({{f(t + dt)}}), dt);
      CHECK(std::abs(d(0, 0) - (2 * a * t + b)) < 1e-12);
    }
  }
}

TEST_CASE("tdc loss examples") {
  const Matrix a = test::random_matrix(4, 3, 1);
  CHECK(tdc_loss(a, a) == 0.0);
  CHECK(tdc_loss(Matrix::from_rows({{1, 0}}), Matrix::from_rows({{0, 0}})) == 0.5);
  const Matrix b = test::random_matrix(4, 3, 2);
  double brute = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    brute += (a.data()[i] - b.data()[i]) * (a.data()[i] - b.data()[i]);
  }
  CHECK(tdc_loss(a, b) == doctest::Approx(brute / 12.0).epsilon(1e-14));
}

TEST_CASE("alpha zero collapses to reconstruction loss") {
  const auto model = edge1_model(3);
  const auto batch = random_batch(6, 9, 10);
  const auto l = total_loss(model, batch, 0.0);
  CHECK(l.total == l.rec_loss);
  CHECK(l.tdc_loss > 0.0);
  CHECK(l.rec_loss == doctest::Approx(mse(reconstruct(model, batch.current), batch.current)));
  const auto l2 = total_loss(model, batch, 0.5);
  CHECK(l2.total == doctest::Approx(l.rec_loss + 0.5 * l.tdc_loss).epsilon(1e-14));
}

TEST_CASE("perfect reconstruction and consistency give zero loss") {
  // Zero encoder and decoder: latents are zero so zdot and the central difference agree,
  // and reconstruction of an all-zero input is exact.
  auto model = edge1_model(4);
  std::vector<double> zeros(model.parameter_count(), 0.0);
  model.assign_flat_parameters(zeros);
  const TripleBatch b{Matrix(3, 9), Matrix(3, 9), Matrix(3, 9), 1.0};
  const auto l = total_loss(model, b, 0.7);
  CHECK(l.total == 0.0);
  CHECK(l.rec_loss == 0.0);
  CHECK(l.tdc_loss == 0.0);
}

TEST_CASE("total loss gradient matches finite differences") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (double alpha : {0.0, 0.002, 1.0}) {
      for (double dt : {1.0, 0.5}) {
        CAPTURE(seed);
        CAPTURE(alpha);
        CAPTURE(dt);
        auto model = edge1_model(seed);
        const auto batch = random_batch(5, 9, seed * 31, dt);
        const auto lg = total_loss_with_gradients(model, batch, alpha);
        CHECK(lg.loss.total == total_loss(model, batch, alpha).total);
        auto objective = [&](const std::vector<double>& p) {
          HTdcAutoencoder m = model;
          m.assign_flat_parameters(p);
          return total_loss(m, batch, alpha).total;
        };
        CHECK(test::max_fd_error(model.flat_parameters(), lg.gradients.flat(), objective) < 1e-5);
      }
    }
  }
}

TEST_CASE("tdc path gradient alone matches finite differences") {
  // Isolate the TDC term by differencing alpha=1 and alpha=0 gradients.
  auto model = edge1_model(9);
  const auto batch = random_batch(4, 9, 77);
  const auto g1 = total_loss_with_gradients(model, batch, 1.0).gradients.flat();
  const auto g0 = total_loss_with_gradients(model, batch, 0.0).gradients.flat();
  std::vector<double> gt(g1.size());
  for (std::size_t i = 0; i < gt.size(); ++i) gt[i] = g1[i] - g0[i];
  auto objective = [&](const std::vector<double>& p) {
    HTdcAutoencoder m = model;
    m.assign_flat_parameters(p);
    return total_loss(m, batch, 0.0).tdc_loss;
  };
  CHECK(test::max_fd_error(model.flat_parameters(), gt, objective, 1e-5, 1e-6) < 1e-5);
  // decoder receives no TDC gradient
  const std::size_t enc = model.encoder().parameter_count();
  for (std::size_t i = enc; i < gt.size(); ++i) CHECK(std::abs(gt[i]) < 1e-15);
}

TEST_CASE("batch gradients are size-weighted additive") {
  const auto model = edge1_model(5);
  const auto batch = random_batch(6, 9, 50);
  const auto full = total_loss_with_gradients(model, batch, 0.3).gradients.flat();
  auto sub = [&](std::size_t b, std::size_t n) {
    return TripleBatch{batch.prev.row_slice(b, n), batch.current.row_slice(b, n),
                       batch.next.row_slice(b, n), batch.delta_t};
  };
  const auto a = total_loss_with_gradients(model, sub(0, 2), 0.3).gradients.flat();
  const auto b = total_loss_with_gradients(model, sub(2, 4), 0.3).gradients.flat();
  for (std::size_t i = 0; i < full.size(); ++i) {
    CHECK(full[i] == doctest::Approx((2.0 * a[i] + 4.0 * b[i]) / 6.0).epsilon(1e-10));
  }
}

TEST_CASE("batch shape checks") {
  const auto model = edge1_model(1);
  auto b = random_batch(3, 9, 1);
  b.next = Matrix(2, 9);
  CHECK_THROWS_AS(total_loss(model, b, 0.1), DimensionError);
  CHECK_THROWS_AS(total_loss(model, random_batch(3, 8, 1), 0.1), DimensionError);
}
