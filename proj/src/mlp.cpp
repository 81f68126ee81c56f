#include "adslab/mlp.hpp"

#include <cmath>
#include <string>

namespace adslab {

namespace {

MlpParams zero_params(MlpShape shape) {
  if (shape.input == 0 || shape.hidden == 0 || shape.output == 0) {
    throw Error("mlp: every layer width must be positive");
  }
  MlpParams p;
  p.weights_in = Matrix(shape.hidden, shape.input);
  p.bias_in.assign(shape.hidden, 0.0);
  p.weights_out = Matrix(shape.output, shape.hidden);
  p.bias_out.assign(shape.output, 0.0);
  return p;
}

struct Activations {
  std::vector<double> pre;     // hidden pre-activations
  std::vector<double> hidden;  // ReLU outputs
  std::vector<double> probs;
};

Activations forward_pass(const Mlp& net, std::span<const double> x) {
  if (x.size() != net.input_size()) {
    throw Error("mlp: input width " + std::to_string(x.size()) + " does not match network input " +
                std::to_string(net.input_size()));
  }
  const auto& p = net.params;
  const std::size_t h = net.hidden_size();
  const std::size_t o = net.output_size();
  Activations a;
  a.pre.assign(p.bias_in.begin(), p.bias_in.end());
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] == 0.0) continue;
    for (std::size_t i = 0; i < h; ++i) a.pre[i] += p.weights_in(i, j) * x[j];
  }
  a.hidden.resize(h);
  for (std::size_t i = 0; i < h; ++i) a.hidden[i] = a.pre[i] > 0.0 ? a.pre[i] : 0.0;
  std::vector<double> logits(p.bias_out.begin(), p.bias_out.end());
  for (std::size_t k = 0; k < o; ++k) {
    const auto row = p.weights_out.row(k);
    double z = logits[k];
    for (std::size_t i = 0; i < h; ++i) z += row[i] * a.hidden[i];
    logits[k] = z;
  }
  a.probs = softmax(logits);
  return a;
}

}  // namespace

Mlp make_zero_mlp(MlpShape shape) {
  Mlp net;
  net.params = zero_params(shape);
  net.velocity = zero_params(shape);
  return net;
}

Mlp make_mlp(MlpShape shape, RngStream& rng, double init_scale) {
  Mlp net = make_zero_mlp(shape);
  const double in_std = init_scale / std::sqrt(static_cast<double>(shape.input));
  const double out_std = init_scale / std::sqrt(static_cast<double>(shape.hidden));
  for (auto& w : net.params.weights_in.data()) w = rng.normal(0.0, in_std);
  for (auto& w : net.params.weights_out.data()) w = rng.normal(0.0, out_std);
  return net;
}

std::vector<double> mlp_forward(const Mlp& net, std::span<const double> x) {
  return forward_pass(net, x).probs;
}

double mlp_loss(const Mlp& net, std::span<const double> x, std::size_t label) {
  if (label >= net.output_size()) throw Error("mlp: label out of range");
  const auto probs = forward_pass(net, x).probs;
  return -std::log(probs[label]);
}

MlpParams mlp_gradient(const Mlp& net, std::span<const double> x, std::size_t label) {
  if (label >= net.output_size()) throw Error("mlp: label out of range");
  const Activations a = forward_pass(net, x);
  const std::size_t h = net.hidden_size();
  const std::size_t o = net.output_size();
  MlpParams g = zero_params({net.input_size(), h, o});

  std::vector<double> dlogits = a.probs;
  dlogits[label] -= 1.0;
  std::vector<double> dhidden(h, 0.0);
  for (std::size_t k = 0; k < o; ++k) {
    g.bias_out[k] = dlogits[k];
    const auto row = net.params.weights_out.row(k);
    auto grow = g.weights_out.row(k);
    for (std::size_t i = 0; i < h; ++i) {
      grow[i] = dlogits[k] * a.hidden[i];
      dhidden[i] += row[i] * dlogits[k];
    }
  }
  for (std::size_t i = 0; i < h; ++i) {
    const double dpre = a.pre[i] > 0.0 ? dhidden[i] : 0.0;
    g.bias_in[i] = dpre;
    for (std::size_t j = 0; j < x.size(); ++j) g.weights_in(i, j) = dpre * x[j];
  }
  return g;
}

double mlp_update(Mlp& net, std::span<const double> x, std::size_t label, double lr,
                  double momentum) {
  const double loss = mlp_loss(net, x, label);
  MlpParams grad = mlp_gradient(net, x, label);

  const auto step = [&](std::span<double> param, std::span<double> vel,
                        std::span<const double> g) {
    for (std::size_t i = 0; i < param.size(); ++i) {
      vel[i] = momentum * vel[i] - lr * g[i];
      param[i] += vel[i];
    }
  };
  step(net.params.weights_in.data(), net.velocity.weights_in.data(), grad.weights_in.data());
  step(net.params.bias_in, net.velocity.bias_in, grad.bias_in);
  step(net.params.weights_out.data(), net.velocity.weights_out.data(), grad.weights_out.data());
  step(net.params.bias_out, net.velocity.bias_out, grad.bias_out);
  return loss;
}

bool all_finite(const MlpParams& params) {
  bool ok = true;
  for_each_parameter(params, [&](const double& v) { ok = ok && std::isfinite(v); });
  return ok;
}

}  // namespace adslab
