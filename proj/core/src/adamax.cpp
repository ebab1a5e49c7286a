#include "htdc/adamax.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "htdc/errors.hpp"

namespace htdc {

AdamaxState make_adamax_state(const Mlp& mlp, AdamaxHyper hyper) {
  return AdamaxState(mlp.parameter_count(), hyper);
}

void adamax_step(std::span<double> params, std::span<const double> grads, AdamaxState& state,
                 double learning_rate) {
  if (params.size() != grads.size() || state.m.size() != params.size() ||
      state.u.size() != params.size()) {
    throw DimensionError("adamax_step: parameter/gradient/state sizes differ (" +
                         std::to_string(params.size()) + ", " + std::to_string(grads.size()) +
                         ", " + std::to_string(state.m.size()) + ")");
  }
  if (!(learning_rate > 0.0)) throw ConfigError("adamax_step: learning rate must be > 0");
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      throw NumericError("adamax_step: non-finite gradient at parameter " + std::to_string(i));
    }
  }

  const auto& h = state.hyper;
  ++state.step_count;
  const double step = learning_rate /
                      (1.0 - std::pow(h.beta1, static_cast<double>(state.step_count)));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = h.beta1 * state.m[i] + (1.0 - h.beta1) * grads[i];
    state.u[i] = std::max(h.beta2 * state.u[i], std::abs(grads[i]));
    params[i] -= step * state.m[i] / (state.u[i] + h.epsilon);
  }
}

void adamax_step(Mlp& mlp, const GradientSet& grads, AdamaxState& state, double learning_rate) {
  if (grads.layers.size() != mlp.layer_count()) {
    throw DimensionError("adamax_step: gradient set does not match network");
  }
  std::vector<double> params = mlp.flat_parameters();
  const std::vector<double> g = grads.flat();
  adamax_step(params, g, state, learning_rate);
  mlp.assign_flat_parameters(params);
}

}  // namespace htdc
