#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <variant>

#include "adslab/environments.hpp"
#include "adslab/mlp.hpp"
#include "adslab/rng.hpp"

namespace adslab {

/// Learns the two predictions of the supervised unit test directly as
/// parameters with plain SGD on the mean squared error.
struct ScalarPredictor {
  double y1_hat = 0.0;
  double y2_hat = 0.0;
  double lr = 0.001;

  SlPrediction predict() const { return {y1_hat, y2_hat}; }
  /// param <- param - lr * (param - target)
  void learn(double y1, double y2);

  friend bool operator==(const ScalarPredictor&, const ScalarPredictor&) = default;
};

/// Single-parameter policy, P(defect) = sigmoid(theta), trained with
/// REINFORCE at discount 0 and no baseline.
struct ReinforcePolicy {
  double theta = 0.0;
  double lr = 0.1;

  double p_defect() const { return sigmoid(theta); }
  RlAction act(RngStream& rng) const;
  void learn(RlAction action, double reward);

  friend bool operator==(const ReinforcePolicy&, const ReinforcePolicy&) = default;
};

/// d/dtheta log pi(action) for pi(defect) = sigmoid(theta).
double reinforce_log_prob_grad(double theta, RlAction action);

/// State-agnostic action values estimated with the sample-average rule,
/// acting epsilon-greedily with uniform tie-breaking.
class TabularQ {
 public:
  explicit TabularQ(double epsilon = 0.1) : epsilon_(epsilon) {}

  RlAction act(RngStream& rng) const;
  /// Seeds one remembered (defect, defect) experience: q(D) = -0.5, n(D) = 1.
  void init_synthetic();
  void learn(RlAction action, double reward);

  double q(RlAction a) const { return q_[index(a)]; }
  std::size_t count(RlAction a) const { return counts_[index(a)]; }
  double epsilon() const { return epsilon_; }
  bool synthetic() const { return synthetic_; }

  friend bool operator==(const TabularQ&, const TabularQ&) = default;

 private:
  static std::size_t index(RlAction a) { return static_cast<std::size_t>(a); }

  std::array<double, 2> q_{0.0, 0.0};
  std::array<std::size_t, 2> counts_{0, 0};
  double epsilon_;
  bool synthetic_ = false;
};

enum class AccuracyMode { kSampled, kGreedy };

struct RecommenderUpdate {
  double loss = 0.0;
  bool correct = false;
};

/// MLP click predictor over one-hot user types; recommends by sampling its
/// own predictive distribution.
struct MlpRecommender {
  Mlp net;
  double lr = 0.01;
  double momentum = 0.9;
  AccuracyMode accuracy = AccuracyMode::kSampled;

  std::size_t act(std::size_t user, RngStream& rng) const;
  /// One momentum-SGD step toward the observed click. `recommended` is the
  /// article this learner put in the top slot; it defines `correct` in
  /// sampled mode, greedy mode compares the pre-update argmax instead.
  RecommenderUpdate learn(std::size_t user, std::size_t click, std::size_t recommended);

  friend bool operator==(const MlpRecommender&, const MlpRecommender&) = default;
};

using Learner = std::variant<ScalarPredictor, ReinforcePolicy, TabularQ, MlpRecommender>;

/// The learning-rate hyperparameter, if the learner has one.
std::optional<double> learning_rate(const Learner& learner);
void set_learning_rate(Learner& learner, double lr);

}  // namespace adslab
