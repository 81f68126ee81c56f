#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "adslab/learners.hpp"
#include "adslab/records.hpp"
#include "adslab/rng.hpp"

namespace adslab {

enum class PerformanceKind { kFinalStepReward, kFinalStepNegLoss, kIntervalAccuracy };

struct MetaPerformance {
  double value = 0.0;
  PerformanceKind kind = PerformanceKind::kFinalStepReward;
};

/// Scores one learner's interval. Throws on an empty window.
MetaPerformance rank_performance(std::span<const StepRecord> window, PerformanceKind kind);

enum class OuterLoopKind { kNone, kPbt, kPbtExploitOnly, kReinforceOl };

std::string_view to_string(OuterLoopKind kind);
OuterLoopKind parse_outer_loop_kind(std::string_view name);

struct OuterLoopConfig {
  OuterLoopKind kind = OuterLoopKind::kNone;
  std::size_t interval = 1;
  double exploit_fraction = 0.2;
  std::pair<double, double> perturb_factors{0.8, 1.2};
  double ol_lr = 1.0;

  void validate() const;
};

struct LearnerSlot {
  Learner learner;
  std::size_t slot_index = 0;
  std::vector<StepRecord> window;  // records since the last outer-loop step
};

/// Number of learners replaced by an EXPLOIT step: max(1, floor(fraction * n)).
std::size_t exploit_count(std::size_t n, double fraction);

struct PbtReport {
  std::vector<std::size_t> ranking;                        // best first
  std::vector<std::pair<std::size_t, std::size_t>> copies;  // (recipient, donor)
  std::vector<double> explore_factors;                     // empty if EXPLORE skipped
};

/// EXPLOIT: each of the bottom k slots receives the learner (parameters and
/// learning rate) of a donor drawn uniformly from the top k. Ties in
/// performance are ordered by a random key drawn from `rng`.
/// EXPLORE (kPbt only): every slot's learning rate is multiplied by one of
/// the two perturbation factors, chosen uniformly. Parameters are never
/// perturbed.
PbtReport pbt_step(std::span<LearnerSlot> population, std::span<const MetaPerformance> perfs,
                   const OuterLoopConfig& config, RngStream& rng);

/// Outer-loop REINFORCE over the last interval:
///   theta += ol_lr * (sum of rewards) * sum_t dlog pi(a_t)/dtheta,
/// with every log-probability gradient taken at the current theta.
void reinforce_ol_step(LearnerSlot& slot, std::span<const StepRecord> window, double ol_lr);

/// Log-uniform learning rate on [lo, hi].
double init_hyper(RngStream& rng, double lo = 0.01, double hi = 1.0);

}  // namespace adslab
