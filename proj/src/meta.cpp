#include "adslab/meta.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace adslab {

MetaPerformance rank_performance(std::span<const StepRecord> window, PerformanceKind kind) {
  if (window.empty()) throw Error("rank_performance: empty window");
  MetaPerformance perf{0.0, kind};
  switch (kind) {
    case PerformanceKind::kFinalStepReward:
      perf.value = window.back().reward;
      break;
    case PerformanceKind::kFinalStepNegLoss:
      perf.value = -window.back().reward;
      break;
    case PerformanceKind::kIntervalAccuracy: {
      std::size_t hits = 0;
      for (const auto& r : window) hits += r.correct ? 1 : 0;
      perf.value = static_cast<double>(hits) / static_cast<double>(window.size());
      break;
    }
  }
  return perf;
}

std::string_view to_string(OuterLoopKind kind) {
  switch (kind) {
    case OuterLoopKind::kNone: return "none";
    case OuterLoopKind::kPbt: return "pbt";
    case OuterLoopKind::kPbtExploitOnly: return "pbt_exploit_only";
    case OuterLoopKind::kReinforceOl: return "reinforce_ol";
  }
  return "none";
}

OuterLoopKind parse_outer_loop_kind(std::string_view name) {
  for (auto k : {OuterLoopKind::kNone, OuterLoopKind::kPbt, OuterLoopKind::kPbtExploitOnly,
                 OuterLoopKind::kReinforceOl}) {
    if (to_string(k) == name) return k;
  }
  throw Error("unknown outer loop kind '" + std::string(name) + "'");
}

void OuterLoopConfig::validate() const {
  if (interval == 0) throw Error("outer loop interval must be positive");
  if (!(exploit_fraction > 0.0 && exploit_fraction <= 0.5)) {
    throw Error("exploit_fraction must lie in (0, 0.5]");
  }
  if (!(perturb_factors.first > 0.0 && perturb_factors.second > 0.0)) {
    throw Error("perturb factors must be positive");
  }
  if (kind == OuterLoopKind::kReinforceOl && !(ol_lr >= 0.0)) {
    throw Error("ol_lr must be non-negative");
  }
}

std::size_t exploit_count(std::size_t n, double fraction) {
  const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  return std::max<std::size_t>(1, k);
}

PbtReport pbt_step(std::span<LearnerSlot> population, std::span<const MetaPerformance> perfs,
                   const OuterLoopConfig& config, RngStream& rng) {
  const std::size_t n = population.size();
  if (n < 2) throw Error("pbt_step: population needs at least 2 learners");
  if (perfs.size() != n) throw Error("pbt_step: one performance per learner required");

  std::vector<std::uint64_t> tie_key(n);
  for (auto& key : tie_key) key = rng.next_u64();

  PbtReport report;
  report.ranking.resize(n);
  std::iota(report.ranking.begin(), report.ranking.end(), std::size_t{0});
  std::sort(report.ranking.begin(), report.ranking.end(), [&](std::size_t a, std::size_t b) {
    if (perfs[a].value != perfs[b].value) return perfs[a].value > perfs[b].value;
    if (tie_key[a] != tie_key[b]) return tie_key[a] < tie_key[b];
    return a < b;
  });

  const std::size_t k = exploit_count(n, config.exploit_fraction);
  for (std::size_t r = 0; r < k; ++r) {
    const std::size_t recipient = report.ranking[n - 1 - r];
    const std::size_t donor = report.ranking[rng.uniform_index(k)];
    population[recipient].learner = population[donor].learner;
    report.copies.emplace_back(recipient, donor);
  }

  if (config.kind == OuterLoopKind::kPbt) {
    report.explore_factors.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double factor =
          rng.uniform() < 0.5 ? config.perturb_factors.first : config.perturb_factors.second;
      report.explore_factors[i] = factor;
      if (auto lr = learning_rate(population[i].learner)) {
        set_learning_rate(population[i].learner, *lr * factor);
      }
    }
  }
  return report;
}

void reinforce_ol_step(LearnerSlot& slot, std::span<const StepRecord> window, double ol_lr) {
  auto* policy = std::get_if<ReinforcePolicy>(&slot.learner);
  if (policy == nullptr) throw Error("reinforce_ol_step: learner is not a REINFORCE policy");
  double total_reward = 0.0;
  double score = 0.0;
  for (const auto& r : window) {
    total_reward += r.reward;
    score += reinforce_log_prob_grad(policy->theta, static_cast<RlAction>(r.action));
  }
  policy->theta += ol_lr * total_reward * score;
}

double init_hyper(RngStream& rng, double lo, double hi) {
  if (!(lo > 0.0 && hi >= lo)) throw Error("init_hyper: need 0 < lo <= hi");
  const double u = rng.uniform();
  return std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
}

}  // namespace adslab
