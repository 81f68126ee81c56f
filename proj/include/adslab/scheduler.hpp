#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "adslab/environments.hpp"
#include "adslab/learners.hpp"
#include "adslab/meta.hpp"
#include "adslab/metrics.hpp"
#include "adslab/records.hpp"

namespace adslab {

struct SwapSchedule {
  bool enabled = false;
  std::size_t n = 1;
};

/// Environment copy inhabited by learner i at time t: (i + t) mod n when
/// swapping, i otherwise.
std::size_t swap_assignment(std::size_t i, std::uint64_t t, const SwapSchedule& schedule);

enum class EnvKind { kSl, kRl, kContent };
enum class LearnerKind { kScalar, kReinforce, kQLearning, kMlp };
enum class RlInitialState { kRandom, kCooperate, kDefect };
enum class LrInit { kFixed, kLogUniform };

std::string_view to_string(EnvKind k);
std::string_view to_string(LearnerKind k);
std::string_view to_string(RlInitialState k);
std::string_view to_string(LrInit k);
std::string_view to_string(PerformanceKind k);
std::string_view to_string(AccuracyMode k);

struct TrialConfig {
  // Identity. `trial_id` labels output rows; `replicate` labels random
  // streams, so trials sharing a replicate index see matched randomness.
  std::uint64_t trial_id = 0;
  std::uint64_t replicate = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_offset = 0;  // shifts learner/env stream indices

  EnvKind env = EnvKind::kRl;
  LearnerKind learner = LearnerKind::kReinforce;

  // Environments.
  double beta = -0.5;
  RlInitialState rl_initial_state = RlInitialState::kRandom;
  double sigma = 2.0;
  ContentConfig content;

  // Learners.
  LrInit lr_init = LrInit::kLogUniform;
  double lr = 0.01;  // used when lr_init is fixed
  double lr_min = 0.01;
  double lr_max = 1.0;
  double theta_init_std = 1.0;
  double scalar_init_std = 0.0;
  double epsilon = 0.1;
  bool synthetic_memory = false;
  std::size_t hidden = 100;
  double momentum = 0.9;
  double mlp_init_scale = 1.0;
  AccuracyMode accuracy = AccuracyMode::kSampled;

  OuterLoopConfig outer;
  PerformanceKind performance = PerformanceKind::kFinalStepReward;

  std::size_t population = 1;
  std::size_t steps = 10000;
  bool swap = false;

  // Output.
  bool record_steps = true;
  std::size_t record_stride = 1;
  std::size_t record_learners = 0;  // 0: all learners
  std::size_t summary_window = 0;   // 0: final 10% of steps
  std::size_t accuracy_window = 50;
  KlDirection kl_direction = KlDirection::kCurrentVsInitial;
  double saturation_threshold = 0.9;

  /// Fills `performance` with the natural ranking signal for the env kind.
  void set_default_performance();
  void validate() const;
  std::size_t effective_summary_window() const;
};

struct TrialSummary {
  std::uint64_t trial_id = 0;
  std::uint64_t replicate = 0;

  // RL.
  double final_cooperation = 0.0;  // population mean over the summary window
  std::vector<double> learner_cooperation;
  double q_cooperate = 0.0;  // population means of final Q-values
  double q_defect = 0.0;
  double mean_theta = 0.0;
  double mean_lr = 0.0;

  // SL.
  double final_y1 = 0.0;  // population means of final parameters
  double final_y2 = 0.0;
  std::vector<double> learner_y1;  // per-learner mean over the summary window
  std::vector<double> learner_y2;

  // Content recommendation.
  double accuracy_auc = 0.0;      // mean correctness over all steps and learners
  double final_accuracy = 0.0;    // mean correctness over the summary window
  double final_concept_shift = 0.0;
  double final_covariate_shift = 0.0;
  double final_max_user_prob = 0.0;
  std::int64_t saturation_step = -1;  // first t where mean max user prob > threshold
};

struct TrialResult {
  TrialConfig config;
  std::vector<StepRecord> steps;
  std::vector<DriftSnapshot> drift;
  std::vector<std::pair<std::uint64_t, double>> cooperation_series;  // (t, population mean)
  TrialSummary summary;
};

TrialResult run_trial(const TrialConfig& config);

/// Runs independent trials on up to `workers` threads; results keep input
/// order. The first trial error is rethrown after all workers stop.
std::vector<TrialResult> run_trials(std::span<const TrialConfig> configs, std::size_t workers = 1);

struct MatchedPair {
  TrialResult baseline;
  TrialResult treated;
};

/// Runs `config` and the same config without an outer loop on identical
/// environment and learner streams.
MatchedPair run_matched_pair(const TrialConfig& config);

/// Scripted five-agent PBT (T = 1, EXPLOIT only) on the RL test with
/// deterministic cooperate/defect agents and no inner learning. Agent 0
/// switches to defect after the first interval.
struct WalkthroughInterval {
  std::uint64_t t = 0;
  std::vector<RlAction> actions;
  std::vector<double> rewards;
  std::vector<std::pair<std::size_t, std::size_t>> copies;  // (recipient, donor)
};

struct Walkthrough {
  std::vector<WalkthroughInterval> intervals;
  std::vector<StepRecord> steps;
};

Walkthrough run_pbt_walkthrough(std::uint64_t seed, std::size_t intervals = 10,
                                std::uint64_t trial_id = 0);

}  // namespace adslab
