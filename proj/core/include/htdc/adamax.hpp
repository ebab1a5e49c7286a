#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "htdc/mlp.hpp"

namespace htdc {

struct AdamaxHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  friend bool operator==(const AdamaxHyper&, const AdamaxHyper&) = default;
};

/// Adamax moment estimates for a flat parameter vector.
///   m <- beta1 m + (1 - beta1) g
///   u <- max(beta2 u, |g|)
///   theta <- theta - lr / (1 - beta1^t) * m / (u + eps)
struct AdamaxState {
  std::vector<double> m;
  std::vector<double> u;
  std::size_t step_count = 0;
  AdamaxHyper hyper;

  AdamaxState() = default;
  explicit AdamaxState(std::size_t n, AdamaxHyper h = {})
      : m(n, 0.0), u(n, 0.0), hyper(h) {}
};

AdamaxState make_adamax_state(const Mlp& mlp, AdamaxHyper hyper = {});

/// Throws NumericError (without touching params or state) if any gradient is non-finite.
void adamax_step(std::span<double> params, std::span<const double> grads, AdamaxState& state,
                 double learning_rate);

void adamax_step(Mlp& mlp, const GradientSet& grads, AdamaxState& state, double learning_rate);

}  // namespace htdc
