#include "adslab/learners.hpp"

#include <algorithm>
#include <cmath>

namespace adslab {

void ScalarPredictor::learn(double y1, double y2) {
  if (!std::isfinite(y1) || !std::isfinite(y2)) throw Error("scalar_learn: non-finite target");
  y1_hat -= lr * (y1_hat - y1);
  y2_hat -= lr * (y2_hat - y2);
}

double reinforce_log_prob_grad(double theta, RlAction action) {
  const double p = sigmoid(theta);
  return action == RlAction::kDefect ? 1.0 - p : -p;
}

RlAction ReinforcePolicy::act(RngStream& rng) const {
  return rng.uniform() < p_defect() ? RlAction::kDefect : RlAction::kCooperate;
}

void ReinforcePolicy::learn(RlAction action, double reward) {
  theta += lr * reward * reinforce_log_prob_grad(theta, action);
}

RlAction TabularQ::act(RngStream& rng) const {
  if (rng.uniform() < epsilon_) {
    return rng.uniform() < 0.5 ? RlAction::kCooperate : RlAction::kDefect;
  }
  const double qc = q_[index(RlAction::kCooperate)];
  const double qd = q_[index(RlAction::kDefect)];
  if (qc > qd) return RlAction::kCooperate;
  if (qd > qc) return RlAction::kDefect;
  return rng.uniform() < 0.5 ? RlAction::kCooperate : RlAction::kDefect;
}

void TabularQ::init_synthetic() {
  if (synthetic_) throw Error("q_init_synthetic: synthetic memory already added");
  if (counts_[0] != 0 || counts_[1] != 0) throw Error("q_init_synthetic: learner is not fresh");
  synthetic_ = true;
  const auto d = index(RlAction::kDefect);
  counts_[d] = 1;
  q_[d] = rl_reward(RlAction::kDefect, RlAction::kDefect, -0.5);
}

void TabularQ::learn(RlAction action, double reward) {
  const auto a = index(action);
  counts_[a] += 1;
  q_[a] += (reward - q_[a]) / static_cast<double>(counts_[a]);
}

std::size_t MlpRecommender::act(std::size_t user, RngStream& rng) const {
  const auto probs = mlp_forward(net, one_hot(user, net.input_size()));
  return sample_categorical(probs, rng);
}

RecommenderUpdate MlpRecommender::learn(std::size_t user, std::size_t click,
                                        std::size_t recommended) {
  if (click >= net.output_size() || recommended >= net.output_size()) {
    throw Error("recommender_learn: article index out of range");
  }
  const auto x = one_hot(user, net.input_size());
  RecommenderUpdate out;
  if (accuracy == AccuracyMode::kGreedy) {
    const auto probs = mlp_forward(net, x);
    const auto best = static_cast<std::size_t>(
        std::max_element(probs.begin(), probs.end()) - probs.begin());
    out.correct = best == click;
  } else {
    out.correct = recommended == click;
  }
  out.loss = mlp_update(net, x, click, lr, momentum);
  return out;
}

std::optional<double> learning_rate(const Learner& learner) {
  return std::visit(
      [](const auto& l) -> std::optional<double> {
        if constexpr (requires { l.lr; }) {
          return l.lr;
        } else {
          return std::nullopt;
        }
      },
      learner);
}

void set_learning_rate(Learner& learner, double lr) {
  std::visit(
      [lr](auto& l) {
        if constexpr (requires { l.lr; }) {
          l.lr = lr;
        } else {
          throw Error("set_learning_rate: learner has no learning rate");
        }
      },
      learner);
}

}  // namespace adslab
