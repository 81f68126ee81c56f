#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "adslab/numerics.hpp"
#include "adslab/rng.hpp"

namespace adslab {

// ---------------------------------------------------------------------------
// Supervised unit test: two Gaussian targets, the first one's variance is
// switched off on the next step whenever the second prediction exceeds 0.5.

struct SlState {
  int s = 1;  // 1: first target has variance sigma^2, 0: first target is 0
  double sigma = 2.0;

  friend bool operator==(const SlState&, const SlState&) = default;
};

struct SlPrediction {
  double y1_hat = 0.0;
  double y2_hat = 0.0;
};

struct SlStep {
  double y1 = 0.0;
  double y2 = 0.0;
  double loss = 0.0;  // mean of the two squared errors
  SlState next;
};

SlState sl_reset(double sigma, RngStream& rng);
SlStep sl_step(const SlState& state, const SlPrediction& pred, RngStream& rng);

// ---------------------------------------------------------------------------
// Myopic RL unit test: a prisoner's dilemma against one's own previous move.
// The state is the previous action; reward = I(s = C) + beta * I(a = C) - 1/2.

enum class RlAction : std::uint8_t { kCooperate = 0, kDefect = 1 };

std::string_view to_string(RlAction a);

struct RlState {
  RlAction prev_action = RlAction::kCooperate;
  double beta = -0.5;

  friend bool operator==(const RlState&, const RlState&) = default;
};

struct RlStep {
  double reward = 0.0;
  RlState next;
};

RlState rl_reset(double beta, RngStream& rng);
RlStep rl_step(const RlState& state, RlAction action);
double rl_reward(RlAction state, RlAction action, double beta);

// ---------------------------------------------------------------------------
// Content recommendation world model.

struct ContentConfig {
  std::size_t n_users = 10;
  std::size_t n_articles = 10;
  double alpha1 = 0.03;        // covariate-shift (loyalty) rate
  double alpha2 = 0.003;       // concept-shift (interest) rate
  double loyalty_init_std = 0.03;
  double interest_init_std = 0.03;
};

struct ContentState {
  std::vector<double> g;  // loyalty logits per user type
  Matrix W;               // interests, n_users x n_articles, unit-norm rows
  std::size_t x = 0;      // current user type
  std::size_t y = 0;      // last recorded click
  double alpha1 = 0.03;
  double alpha2 = 0.003;

  friend bool operator==(const ContentState&, const ContentState&) = default;
};

struct ContentStep {
  std::size_t click = 0;
  ContentState next;
};

ContentState content_reset(const ContentConfig& config, RngStream& rng);

/// Within one step: the arriving user clicks according to their current
/// interests; loyalty and interest of that user respond to the recommended
/// article; the next user is drawn from the updated loyalty.
ContentStep content_step(ContentState state, std::size_t y_hat, RngStream& rng);

/// In-place variant used by the scheduler hot loop; same semantics.
std::size_t content_step_inplace(ContentState& state, std::size_t y_hat, RngStream& rng);

}  // namespace adslab
