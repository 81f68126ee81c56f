#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adslab/numerics.hpp"
#include "adslab/rng.hpp"

namespace adslab {

struct MlpShape {
  std::size_t input = 0;
  std::size_t hidden = 100;
  std::size_t output = 0;
};

/// One-hidden-layer ReLU network with a softmax head.
struct MlpParams {
  Matrix weights_in;   // hidden x input
  std::vector<double> bias_in;
  Matrix weights_out;  // output x hidden
  std::vector<double> bias_out;

  friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

struct Mlp {
  MlpParams params;
  MlpParams velocity;  // momentum buffers, same shapes as params

  std::size_t input_size() const { return params.weights_in.cols(); }
  std::size_t hidden_size() const { return params.weights_in.rows(); }
  std::size_t output_size() const { return params.weights_out.rows(); }

  friend bool operator==(const Mlp&, const Mlp&) = default;
};

/// All parameters zero. Outputs the uniform distribution for every input.
Mlp make_zero_mlp(MlpShape shape);

/// Weights ~ Normal(0, init_scale^2 / fan_in), biases zero, velocity zero.
Mlp make_mlp(MlpShape shape, RngStream& rng, double init_scale = 1.0);

std::vector<double> mlp_forward(const Mlp& net, std::span<const double> x);

/// Cross-entropy -log p[label] without touching the parameters.
double mlp_loss(const Mlp& net, std::span<const double> x, std::size_t label);

/// Gradient of mlp_loss with respect to every parameter.
MlpParams mlp_gradient(const Mlp& net, std::span<const double> x, std::size_t label);

/// One momentum-SGD step on (x, label); returns the pre-update loss.
///   velocity <- momentum * velocity - lr * grad;  param <- param + velocity
double mlp_update(Mlp& net, std::span<const double> x, std::size_t label, double lr,
                  double momentum);

/// Visits every scalar of a parameter set in a fixed order.
template <typename Params, typename Fn>
void for_each_parameter(Params& params, Fn&& fn) {
  for (auto& w : params.weights_in.data()) fn(w);
  for (auto& b : params.bias_in) fn(b);
  for (auto& w : params.weights_out.data()) fn(w);
  for (auto& b : params.bias_out) fn(b);
}

bool all_finite(const MlpParams& params);

}  // namespace adslab
