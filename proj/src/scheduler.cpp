#include "adslab/scheduler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace adslab {

std::size_t swap_assignment(std::size_t i, std::uint64_t t, const SwapSchedule& schedule) {
  if (schedule.n == 0 || i >= schedule.n) {
    throw Error("swap_assignment: learner index " + std::to_string(i) + " out of range for N=" +
                std::to_string(schedule.n));
  }
  if (!schedule.enabled) return i;
  return static_cast<std::size_t>((static_cast<std::uint64_t>(i) + t % schedule.n) % schedule.n);
}

std::string_view to_string(EnvKind k) {
  switch (k) {
    case EnvKind::kSl: return "sl";
    case EnvKind::kRl: return "rl";
    case EnvKind::kContent: return "content";
  }
  return "rl";
}

std::string_view to_string(LearnerKind k) {
  switch (k) {
    case LearnerKind::kScalar: return "scalar";
    case LearnerKind::kReinforce: return "reinforce";
    case LearnerKind::kQLearning: return "qlearning";
    case LearnerKind::kMlp: return "mlp";
  }
  return "reinforce";
}

std::string_view to_string(RlInitialState k) {
  switch (k) {
    case RlInitialState::kRandom: return "random";
    case RlInitialState::kCooperate: return "cooperate";
    case RlInitialState::kDefect: return "defect";
  }
  return "random";
}

std::string_view to_string(LrInit k) { return k == LrInit::kFixed ? "fixed" : "log_uniform"; }

std::string_view to_string(PerformanceKind k) {
  switch (k) {
    case PerformanceKind::kFinalStepReward: return "final_step_reward";
    case PerformanceKind::kFinalStepNegLoss: return "final_step_neg_loss";
    case PerformanceKind::kIntervalAccuracy: return "interval_accuracy";
  }
  return "final_step_reward";
}

std::string_view to_string(AccuracyMode k) {
  return k == AccuracyMode::kSampled ? "sampled" : "greedy";
}

void TrialConfig::set_default_performance() {
  switch (env) {
    case EnvKind::kSl: performance = PerformanceKind::kFinalStepNegLoss; break;
    case EnvKind::kRl: performance = PerformanceKind::kFinalStepReward; break;
    case EnvKind::kContent: performance = PerformanceKind::kIntervalAccuracy; break;
  }
}

void TrialConfig::validate() const {
  const bool compatible = (env == EnvKind::kSl && learner == LearnerKind::kScalar) ||
                          (env == EnvKind::kRl && (learner == LearnerKind::kReinforce ||
                                                   learner == LearnerKind::kQLearning)) ||
                          (env == EnvKind::kContent && learner == LearnerKind::kMlp);
  if (!compatible) {
    throw Error("learner '" + std::string(to_string(learner)) + "' cannot act in env '" +
                std::string(to_string(env)) + "'");
  }
  if (population == 0) throw Error("population must be at least 1");
  if (steps == 0) throw Error("steps must be positive");
  outer.validate();
  if (outer.kind != OuterLoopKind::kNone) {
    if (steps % outer.interval != 0) throw Error("steps must be divisible by the outer-loop interval");
    if ((outer.kind == OuterLoopKind::kPbt || outer.kind == OuterLoopKind::kPbtExploitOnly) &&
        population < 2) {
      throw Error("PBT needs a population of at least 2");
    }
    if (outer.kind == OuterLoopKind::kReinforceOl && learner != LearnerKind::kReinforce) {
      throw Error("reinforce_ol requires the reinforce learner");
    }
  }
  if (record_stride == 0) throw Error("record_stride must be positive");
  if (accuracy_window == 0) throw Error("accuracy_window must be positive");
  if (summary_window > steps) throw Error("summary_window exceeds steps");
  if (env == EnvKind::kSl && !(sigma > 0.0)) throw Error("sigma must be positive");
  if (env == EnvKind::kRl && learner == LearnerKind::kQLearning &&
      !(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error("epsilon must lie in [0, 1]");
  }
  if (lr_init == LrInit::kFixed && !(lr >= 0.0)) throw Error("lr must be non-negative");
  if (lr_init == LrInit::kLogUniform && !(lr_min > 0.0 && lr_max >= lr_min)) {
    throw Error("need 0 < lr_min <= lr_max");
  }
}

std::size_t TrialConfig::effective_summary_window() const {
  if (summary_window > 0) return summary_window;
  return std::max<std::size_t>(1, steps / 10);
}

namespace {

class Runner {
 public:
  explicit Runner(const TrialConfig& config)
      : cfg_(config),
        n_(config.population),
        schedule_{config.swap, config.population},
        meta_rng_(config.seed, {config.replicate, 0, StreamRole::kMeta}) {
    cfg_.validate();
    init_streams();
    init_envs();
    init_learners();
    window_start_ = cfg_.steps - cfg_.effective_summary_window();
    coop_in_window_.assign(n_, 0);
    y1_sum_.assign(n_, 0.0);
    y2_sum_.assign(n_, 0.0);
    recent_correct_.assign(n_, {});
    recent_hits_.assign(n_, 0);
  }

  TrialResult run() {
    result_.config = cfg_;
    if (cfg_.env == EnvKind::kContent) snapshot_drift(0);
    for (std::uint64_t t = 0; t < cfg_.steps; ++t) {
      step(t);
      if (cfg_.outer.kind != OuterLoopKind::kNone && (t + 1) % cfg_.outer.interval == 0) {
        outer_step();
      }
      const std::uint64_t next = t + 1;
      if (cfg_.env == EnvKind::kContent) {
        update_saturation(next);
        if (next % cfg_.record_stride == 0 || next == cfg_.steps) snapshot_drift(next);
      }
    }
    finish();
    return std::move(result_);
  }

 private:
  std::uint64_t stream_index(std::size_t i) const { return cfg_.stream_offset + i; }

  void init_streams() {
    learner_rng_.reserve(n_);
    env_rng_.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      learner_rng_.emplace_back(cfg_.seed,
                                StreamId{cfg_.replicate, stream_index(i), StreamRole::kLearnerAct});
      env_rng_.emplace_back(cfg_.seed,
                            StreamId{cfg_.replicate, stream_index(i), StreamRole::kEnvStep});
    }
  }

  void init_envs() {
    switch (cfg_.env) {
      case EnvKind::kSl:
        for (std::size_t j = 0; j < n_; ++j) {
          RngStream rng(cfg_.seed, {cfg_.replicate, stream_index(j), StreamRole::kEnvInit});
          sl_envs_.push_back(sl_reset(cfg_.sigma, rng));
        }
        break;
      case EnvKind::kRl:
        for (std::size_t j = 0; j < n_; ++j) {
          RngStream rng(cfg_.seed, {cfg_.replicate, stream_index(j), StreamRole::kEnvInit});
          RlState s = rl_reset(cfg_.beta, rng);
          if (cfg_.rl_initial_state == RlInitialState::kCooperate) s.prev_action = RlAction::kCooperate;
          if (cfg_.rl_initial_state == RlInitialState::kDefect) s.prev_action = RlAction::kDefect;
          rl_envs_.push_back(s);
        }
        break;
      case EnvKind::kContent: {
        // Every copy starts from the same user population.
        RngStream rng(cfg_.seed, {cfg_.replicate, 0, StreamRole::kEnvInit});
        const ContentState initial = content_reset(cfg_.content, rng);
        content_envs_.assign(n_, initial);
        initial_w_ = initial.W;
        initial_g_ = initial.g;
        break;
      }
    }
  }

  double initial_lr(std::size_t i) const {
    if (cfg_.lr_init == LrInit::kFixed) return cfg_.lr;
    RngStream rng(cfg_.seed, {cfg_.replicate, stream_index(i), StreamRole::kHyperInit});
    return init_hyper(rng, cfg_.lr_min, cfg_.lr_max);
  }

  void init_learners() {
    slots_.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      RngStream rng(cfg_.seed, {cfg_.replicate, stream_index(i), StreamRole::kLearnerInit});
      Learner learner;
      switch (cfg_.learner) {
        case LearnerKind::kScalar: {
          ScalarPredictor p;
          p.y1_hat = rng.normal(0.0, cfg_.scalar_init_std);
          p.y2_hat = rng.normal(0.0, cfg_.scalar_init_std);
          p.lr = initial_lr(i);
          learner = p;
          break;
        }
        case LearnerKind::kReinforce: {
          ReinforcePolicy p;
          p.theta = rng.normal(0.0, cfg_.theta_init_std);
          p.lr = initial_lr(i);
          learner = p;
          break;
        }
        case LearnerKind::kQLearning: {
          TabularQ q(cfg_.epsilon);
          if (cfg_.synthetic_memory) q.init_synthetic();
          learner = q;
          break;
        }
        case LearnerKind::kMlp: {
          MlpRecommender r;
          r.net = make_mlp({cfg_.content.n_users, cfg_.hidden, cfg_.content.n_articles}, rng,
                           cfg_.mlp_init_scale);
          r.lr = initial_lr(i);
          r.momentum = cfg_.momentum;
          r.accuracy = cfg_.accuracy;
          learner = std::move(r);
          break;
        }
      }
      slots_.push_back(LearnerSlot{std::move(learner), i, {}});
    }
  }

  bool recorded_learner(std::size_t i) const {
    return cfg_.record_learners == 0 || i < cfg_.record_learners;
  }

  void step(std::uint64_t t) {
    const bool in_window = t >= window_start_;
    const bool record = cfg_.record_steps && t % cfg_.record_stride == 0;
    std::size_t cooperators = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t j = swap_assignment(i, t, schedule_);
      StepRecord rec;
      rec.trial = cfg_.trial_id;
      rec.t = t;
      rec.learner = static_cast<std::uint32_t>(i);
      rec.env = static_cast<std::uint32_t>(j);
      Learner& learner = slots_[i].learner;
      switch (cfg_.env) {
        case EnvKind::kSl: {
          auto& p = std::get<ScalarPredictor>(learner);
          const SlPrediction pred = p.predict();
          const SlStep out = sl_step(sl_envs_[j], pred, env_rng_[j]);
          sl_envs_[j] = out.next;
          p.learn(out.y1, out.y2);
          rec.action = pred.y2_hat > 0.5 ? 1 : 0;
          rec.reward = out.loss;
          rec.extra = pred.y2_hat;
          if (in_window) {
            y1_sum_[i] += pred.y1_hat;
            y2_sum_[i] += pred.y2_hat;
          }
          break;
        }
        case EnvKind::kRl: {
          RlAction a{};
          if (auto* p = std::get_if<ReinforcePolicy>(&learner)) {
            a = p->act(learner_rng_[i]);
            const RlStep out = rl_step(rl_envs_[j], a);
            rl_envs_[j] = out.next;
            p->learn(a, out.reward);
            rec.reward = out.reward;
          } else {
            auto& q = std::get<TabularQ>(learner);
            a = q.act(learner_rng_[i]);
            const RlStep out = rl_step(rl_envs_[j], a);
            rl_envs_[j] = out.next;
            q.learn(a, out.reward);
            rec.reward = out.reward;
          }
          const bool coop = a == RlAction::kCooperate;
          rec.action = static_cast<std::int64_t>(a);
          rec.extra = coop ? 1.0 : 0.0;
          cooperators += coop ? 1 : 0;
          if (in_window && coop) coop_in_window_[i] += 1;
          break;
        }
        case EnvKind::kContent: {
          auto& r = std::get<MlpRecommender>(learner);
          ContentState& env = content_envs_[j];
          const std::size_t user = env.x;
          const std::size_t y_hat = r.act(user, learner_rng_[i]);
          const std::size_t click = content_step_inplace(env, y_hat, env_rng_[j]);
          const RecommenderUpdate upd = r.learn(user, click, y_hat);
          rec.action = static_cast<std::int64_t>(y_hat);
          rec.reward = upd.loss;
          rec.correct = upd.correct;
          rec.extra = upd.correct ? 1.0 : 0.0;
          track_accuracy(i, upd.correct, in_window);
          break;
        }
      }
      if (cfg_.outer.kind != OuterLoopKind::kNone) slots_[i].window.push_back(rec);
      if (record && recorded_learner(i)) result_.steps.push_back(rec);
    }
    if (cfg_.env == EnvKind::kRl && t % cfg_.record_stride == 0) {
      result_.cooperation_series.emplace_back(
          t, static_cast<double>(cooperators) / static_cast<double>(n_));
    }
  }

  void track_accuracy(std::size_t i, bool correct, bool in_window) {
    auto& recent = recent_correct_[i];
    recent.push_back(correct);
    recent_hits_[i] += correct ? 1 : 0;
    if (recent.size() > cfg_.accuracy_window) {
      recent_hits_[i] -= recent.front() ? 1 : 0;
      recent.pop_front();
    }
    total_hits_ += correct ? 1 : 0;
    if (in_window) window_hits_ += correct ? 1 : 0;
  }

  void outer_step() {
    switch (cfg_.outer.kind) {
      case OuterLoopKind::kNone:
        break;
      case OuterLoopKind::kPbt:
      case OuterLoopKind::kPbtExploitOnly: {
        std::vector<MetaPerformance> perfs;
        perfs.reserve(n_);
        for (const auto& slot : slots_) perfs.push_back(rank_performance(slot.window, cfg_.performance));
        pbt_step(slots_, perfs, cfg_.outer, meta_rng_);
        break;
      }
      case OuterLoopKind::kReinforceOl:
        for (auto& slot : slots_) reinforce_ol_step(slot, slot.window, cfg_.outer.ol_lr);
        break;
    }
    for (auto& slot : slots_) slot.window.clear();
  }

  double mean_max_user_prob() const {
    double total = 0.0;
    for (const auto& env : content_envs_) {
      const auto p = softmax(env.g);
      total += *std::max_element(p.begin(), p.end());
    }
    return total / static_cast<double>(content_envs_.size());
  }

  void update_saturation(std::uint64_t t) {
    if (result_.summary.saturation_step >= 0) return;
    if (mean_max_user_prob() > cfg_.saturation_threshold) {
      result_.summary.saturation_step = static_cast<std::int64_t>(t);
    }
  }

  void snapshot_drift(std::uint64_t t) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (!recorded_learner(i)) continue;
      // At time t the learner is about to act in env (i + t) mod N.
      const std::size_t j = swap_assignment(i, t, schedule_);
      DriftSnapshot s;
      s.trial = cfg_.trial_id;
      s.t = t;
      s.learner = static_cast<std::uint32_t>(i);
      s.env = static_cast<std::uint32_t>(j);
      s.accuracy = recent_correct_[i].empty()
                       ? 0.0
                       : static_cast<double>(recent_hits_[i]) /
                             static_cast<double>(recent_correct_[i].size());
      s.concept_shift = concept_shift(initial_w_, content_envs_[j].W);
      s.covariate_shift = covariate_shift(initial_g_, content_envs_[j].g, cfg_.kl_direction);
      result_.drift.push_back(s);
    }
  }

  void finish() {
    auto& sum = result_.summary;
    sum.trial_id = cfg_.trial_id;
    sum.replicate = cfg_.replicate;
    const double window = static_cast<double>(cfg_.effective_summary_window());
    const double n = static_cast<double>(n_);

    switch (cfg_.env) {
      case EnvKind::kRl: {
        double coop = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
          const double c = static_cast<double>(coop_in_window_[i]) / window;
          sum.learner_cooperation.push_back(c);
          coop += c;
        }
        sum.final_cooperation = coop / n;
        for (const auto& slot : slots_) {
          if (const auto* q = std::get_if<TabularQ>(&slot.learner)) {
            sum.q_cooperate += q->q(RlAction::kCooperate) / n;
            sum.q_defect += q->q(RlAction::kDefect) / n;
          } else if (const auto* p = std::get_if<ReinforcePolicy>(&slot.learner)) {
            sum.mean_theta += p->theta / n;
            sum.mean_lr += p->lr / n;
          }
        }
        break;
      }
      case EnvKind::kSl:
        for (std::size_t i = 0; i < n_; ++i) {
          const auto& p = std::get<ScalarPredictor>(slots_[i].learner);
          sum.final_y1 += p.y1_hat / n;
          sum.final_y2 += p.y2_hat / n;
          sum.mean_lr += p.lr / n;
          sum.learner_y1.push_back(y1_sum_[i] / window);
          sum.learner_y2.push_back(y2_sum_[i] / window);
        }
        break;
      case EnvKind::kContent: {
        sum.accuracy_auc =
            static_cast<double>(total_hits_) / (n * static_cast<double>(cfg_.steps));
        sum.final_accuracy = static_cast<double>(window_hits_) / (n * window);
        double concept_sum = 0.0;
        double covariate = 0.0;
        for (const auto& env : content_envs_) {
          concept_sum += concept_shift(initial_w_, env.W);
          covariate += covariate_shift(initial_g_, env.g, cfg_.kl_direction);
        }
        sum.final_concept_shift = concept_sum / n;
        sum.final_covariate_shift = covariate / n;
        sum.final_max_user_prob = mean_max_user_prob();
        for (const auto& slot : slots_) {
          sum.mean_lr += std::get<MlpRecommender>(slot.learner).lr / n;
        }
        break;
      }
    }
  }

  TrialConfig cfg_;
  std::size_t n_;
  SwapSchedule schedule_;
  RngStream meta_rng_;
  std::vector<RngStream> learner_rng_;
  std::vector<RngStream> env_rng_;
  std::vector<LearnerSlot> slots_;
  std::vector<SlState> sl_envs_;
  std::vector<RlState> rl_envs_;
  std::vector<ContentState> content_envs_;
  Matrix initial_w_;
  std::vector<double> initial_g_;

  std::uint64_t window_start_ = 0;
  std::vector<std::size_t> coop_in_window_;
  std::vector<double> y1_sum_;
  std::vector<double> y2_sum_;
  std::vector<std::deque<bool>> recent_correct_;
  std::vector<std::size_t> recent_hits_;
  std::size_t total_hits_ = 0;
  std::size_t window_hits_ = 0;

  TrialResult result_;
};

}  // namespace

TrialResult run_trial(const TrialConfig& config) { return Runner(config).run(); }

std::vector<TrialResult> run_trials(std::span<const TrialConfig> configs, std::size_t workers) {
  std::vector<TrialResult> out(configs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex mu;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= configs.size()) return;
      try {
        out[i] = run_trial(configs[i]);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(configs.size(), 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

MatchedPair run_matched_pair(const TrialConfig& config) {
  if (config.env != EnvKind::kContent) {
    throw Error("run_matched_pair: defined for content recommendation trials");
  }
  TrialConfig baseline = config;
  baseline.outer.kind = OuterLoopKind::kNone;
  return MatchedPair{run_trial(baseline), run_trial(config)};
}

Walkthrough run_pbt_walkthrough(std::uint64_t seed, std::size_t intervals,
                                std::uint64_t trial_id) {
  constexpr std::size_t kAgents = 5;
  constexpr double kCooperate = -40.0;  // sigmoid(-40) ~ 4e-18: always cooperates
  constexpr double kDefect = 40.0;

  OuterLoopConfig outer;
  outer.kind = OuterLoopKind::kPbtExploitOnly;
  outer.interval = 1;

  std::vector<LearnerSlot> slots;
  std::vector<RlState> envs;
  std::vector<RngStream> act_rng;
  for (std::size_t i = 0; i < kAgents; ++i) {
    slots.push_back(LearnerSlot{ReinforcePolicy{kCooperate, 0.0}, i, {}});
    envs.push_back(RlState{RlAction::kCooperate, -0.5});
    act_rng.emplace_back(seed, StreamId{trial_id, i, StreamRole::kLearnerAct});
  }
  RngStream meta(seed, {trial_id, 0, StreamRole::kMeta});

  Walkthrough out;
  for (std::uint64_t t = 0; t < intervals; ++t) {
    if (t == 1) std::get<ReinforcePolicy>(slots[0].learner).theta = kDefect;

    WalkthroughInterval interval;
    interval.t = t;
    std::vector<MetaPerformance> perfs;
    for (std::size_t i = 0; i < kAgents; ++i) {
      const auto& policy = std::get<ReinforcePolicy>(slots[i].learner);
      const RlAction a = policy.act(act_rng[i]);
      const RlStep step = rl_step(envs[i], a);
      envs[i] = step.next;
      StepRecord rec{trial_id, t, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i),
                     static_cast<std::int64_t>(a), step.reward,
                     a == RlAction::kCooperate ? 1.0 : 0.0, false};
      out.steps.push_back(rec);
      interval.actions.push_back(a);
      interval.rewards.push_back(step.reward);
      perfs.push_back({step.reward, PerformanceKind::kFinalStepReward});
    }
    interval.copies = pbt_step(slots, perfs, outer, meta).copies;
    out.intervals.push_back(std::move(interval));
  }
  return out;
}

}  // namespace adslab
