#include "adslab/environments.hpp"

#include <cmath>
#include <string>

namespace adslab {

SlState sl_reset(double sigma, RngStream& /*rng*/) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error("sl_reset: sigma must be positive");
  return SlState{1, sigma};
}

SlStep sl_step(const SlState& state, const SlPrediction& pred, RngStream& rng) {
  if (!std::isfinite(pred.y1_hat) || !std::isfinite(pred.y2_hat)) {
    throw Error("sl_step: non-finite prediction");
  }
  // Both normals are always drawn so stream consumption does not depend on s.
  const double z1 = rng.normal();
  const double z2 = rng.normal();
  SlStep out;
  out.y1 = state.s == 1 ? state.sigma * z1 : 0.0;
  out.y2 = z2;
  const double e1 = pred.y1_hat - out.y1;
  const double e2 = pred.y2_hat - out.y2;
  out.loss = 0.5 * (e1 * e1 + e2 * e2);
  out.next = state;
  out.next.s = pred.y2_hat > 0.5 ? 0 : 1;
  return out;
}

std::string_view to_string(RlAction a) {
  return a == RlAction::kCooperate ? "cooperate" : "defect";
}

RlState rl_reset(double beta, RngStream& rng) {
  const RlAction s0 = rng.uniform() < 0.5 ? RlAction::kCooperate : RlAction::kDefect;
  return RlState{s0, beta};
}

double rl_reward(RlAction state, RlAction action, double beta) {
  const double s_coop = state == RlAction::kCooperate ? 1.0 : 0.0;
  const double a_coop = action == RlAction::kCooperate ? 1.0 : 0.0;
  return s_coop + beta * a_coop - 0.5;
}

RlStep rl_step(const RlState& state, RlAction action) {
  return RlStep{rl_reward(state.prev_action, action, state.beta), RlState{action, state.beta}};
}

ContentState content_reset(const ContentConfig& config, RngStream& rng) {
  if (config.n_users < 2 || config.n_articles < 2) {
    throw Error("content_reset: need at least 2 user types and 2 article types");
  }
  ContentState st;
  st.alpha1 = config.alpha1;
  st.alpha2 = config.alpha2;
  st.g.resize(config.n_users);
  for (double& v : st.g) v = rng.normal(0.0, config.loyalty_init_std);
  st.W = Matrix(config.n_users, config.n_articles);
  for (std::size_t u = 0; u < config.n_users; ++u) {
    auto row = st.W.row(u);
    double norm = 0.0;
    // A zero row has probability zero, but redraw rather than divide by it.
    while (norm == 0.0) {
      for (double& v : row) v = rng.normal(0.0, config.interest_init_std);
      norm = l2_norm(row);
    }
    for (double& v : row) v /= norm;
  }
  st.x = sample_categorical(softmax(st.g), rng);
  st.y = sample_categorical(softmax(st.W.row(st.x)), rng);
  return st;
}

std::size_t content_step_inplace(ContentState& st, std::size_t y_hat, RngStream& rng) {
  if (y_hat >= st.W.cols()) throw Error("content_step: recommended article out of range");
  if (st.x >= st.W.rows()) throw Error("content_step: user index out of range");
  const std::size_t x = st.x;
  auto row = st.W.row(x);

  const std::size_t click = sample_categorical(softmax(row), rng);

  st.g[x] += st.alpha1 * row[y_hat];

  row[y_hat] += st.alpha2;
  const double norm = l2_norm(row);
  if (norm == 0.0) throw Error("content_step: interest row collapsed to zero");
  for (double& v : row) v /= norm;

  st.x = sample_categorical(softmax(st.g), rng);
  st.y = sample_categorical(softmax(st.W.row(st.x)), rng);
  return click;
}

ContentStep content_step(ContentState state, std::size_t y_hat, RngStream& rng) {
  const std::size_t click = content_step_inplace(state, y_hat, rng);
  return ContentStep{click, std::move(state)};
}

}  // namespace adslab
