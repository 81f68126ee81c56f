#include "adslab/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "json.hpp"

namespace adslab {

using nlohmann::json;

std::string_view to_string(Scenario s) {
  return s == Scenario::kTrials ? "trials" : "pbt_walkthrough";
}

bool SweepAxes::empty() const {
  return population.empty() && interval.empty() && beta.empty() && swap.empty() &&
         alpha1.empty() && alpha2.empty() && outer.empty();
}

std::size_t SweepAxes::points() const {
  auto len = [](std::size_t n) { return n == 0 ? std::size_t{1} : n; };
  return len(population.size()) * len(interval.size()) * len(beta.size()) * len(swap.size()) *
         len(alpha1.size()) * len(alpha2.size()) * len(outer.size());
}

std::vector<std::uint64_t> ExperimentConfig::seeds() const {
  std::vector<std::uint64_t> out(n_seeds);
  for (std::size_t r = 0; r < n_seeds; ++r) out[r] = seed + r;
  return out;
}

std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg) {
  std::vector<TrialConfig> points{cfg.base};
  // Expands one axis; earlier axes vary slowest.
  auto expand = [&points](const auto& values, auto apply) {
    if (values.empty()) return;
    std::vector<TrialConfig> next;
    next.reserve(points.size() * values.size());
    for (const auto& p : points) {
      for (const auto& v : values) {
        TrialConfig c = p;
        apply(c, v);
        next.push_back(std::move(c));
      }
    }
    points = std::move(next);
  };
  const SweepAxes& ax = cfg.sweep;
  expand(ax.outer, [](TrialConfig& c, OuterLoopKind k) { c.outer.kind = k; });
  expand(ax.population, [](TrialConfig& c, std::size_t n) { c.population = n; });
  expand(ax.interval, [](TrialConfig& c, std::size_t t) { c.outer.interval = t; });
  expand(ax.beta, [](TrialConfig& c, double b) { c.beta = b; });
  expand(ax.swap, [](TrialConfig& c, bool s) { c.swap = s; });
  expand(ax.alpha1, [](TrialConfig& c, double a) { c.content.alpha1 = a; });
  expand(ax.alpha2, [](TrialConfig& c, double a) { c.content.alpha2 = a; });

  std::vector<SweepPoint> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out.push_back({i, std::move(points[i])});
  return out;
}

std::vector<TrialConfig> expand_trials(const ExperimentConfig& cfg) {
  std::vector<TrialConfig> out;
  const auto seeds = cfg.seeds();
  for (const auto& point : sweep_points(cfg)) {
    for (std::size_t r = 0; r < seeds.size(); ++r) {
      TrialConfig c = point.config;
      c.trial_id = point.index * cfg.n_seeds + r;
      c.replicate = r;
      c.seed = seeds[r];
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::string_view beta_label(double beta) {
  if (beta < 0.0) return "incentive-opposed";
  if (beta > 0.0) return "incentive-compatible";
  return "incentive-orthogonal";
}

void ExperimentConfig::validate() const {
  if (n_seeds == 0) throw ConfigError("seeds: need at least one seed");
  if (scenario == Scenario::kPbtWalkthrough) {
    if (walkthrough_intervals == 0) throw ConfigError("walkthrough.intervals must be positive");
    return;
  }
  for (const auto& point : sweep_points(*this)) {
    try {
      point.config.validate();
    } catch (const Error& e) {
      std::string where = sweep.empty() ? "config" : "sweep point " + std::to_string(point.index);
      throw ConfigError(where + ": " + e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// Presets

namespace {

TrialConfig rl_base() {
  TrialConfig c;
  c.env = EnvKind::kRl;
  c.learner = LearnerKind::kReinforce;
  c.beta = -0.5;
  c.lr_init = LrInit::kLogUniform;
  c.steps = 10000;
  c.set_default_performance();
  return c;
}

TrialConfig sl_base() {
  TrialConfig c;
  c.env = EnvKind::kSl;
  c.learner = LearnerKind::kScalar;
  c.sigma = 2.0;
  c.lr_init = LrInit::kFixed;
  c.lr = 0.001;
  c.steps = 10000;
  c.set_default_performance();
  return c;
}

TrialConfig qlearning_base() {
  TrialConfig c = rl_base();
  c.learner = LearnerKind::kQLearning;
  c.epsilon = 0.1;
  c.synthetic_memory = true;
  c.rl_initial_state = RlInitialState::kCooperate;
  c.steps = 3000;
  c.summary_window = 500;
  return c;
}

TrialConfig content_base() {
  TrialConfig c;
  c.env = EnvKind::kContent;
  c.learner = LearnerKind::kMlp;
  c.lr_init = LrInit::kFixed;
  c.lr = 0.01;
  c.population = 20;
  c.steps = 2000;
  c.outer.kind = OuterLoopKind::kPbtExploitOnly;
  c.outer.interval = 10;
  c.record_stride = 10;
  c.set_default_performance();
  return c;
}

// Large populations keep traces bounded by recording a few learners sparsely.
void sparse_records(TrialConfig& c) {
  c.record_stride = 10;
  c.record_learners = 5;
}

const std::vector<std::string>& names() {
  static const std::vector<std::string> n{
      "sl-baseline",       "sl-pbt",           "rl-baseline",
      "rl-pbt",            "rl-pbt-swap",      "rl-reinforce-ol",
      "rl-qlearning",      "rl-qlearning-swap", "rl-beta-sweep",
      "contentrec-pair",   "contentrec-swap",  "contentrec-alpha-grid",
      "appendix-3-2-walkthrough"};
  return n;
}

}  // namespace

std::vector<std::string> preset_names() { return names(); }

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig e;
  e.preset = std::string(name);
  if (name == "sl-baseline") {
    e.base = sl_base();
    e.n_seeds = 50;
    e.base.record_stride = 10;
  } else if (name == "sl-pbt") {
    e.base = sl_base();
    e.base.lr_init = LrInit::kLogUniform;
    e.base.population = 100;
    e.base.outer.kind = OuterLoopKind::kPbt;
    sparse_records(e.base);
    e.n_seeds = 10;
    e.sweep.interval = {1, 10};
    e.sweep.swap = {false, true};
  } else if (name == "rl-baseline") {
    e.base = rl_base();
    e.n_seeds = 50;
    e.base.record_stride = 10;
  } else if (name == "rl-pbt") {
    e.base = rl_base();
    e.base.outer.kind = OuterLoopKind::kPbt;
    sparse_records(e.base);
    e.n_seeds = 5;
    e.sweep.outer = {OuterLoopKind::kNone, OuterLoopKind::kPbt};
    e.sweep.population = {10, 100, 1000};
    e.sweep.interval = {1, 10};
  } else if (name == "rl-pbt-swap") {
    e.base = rl_base();
    e.base.outer.kind = OuterLoopKind::kPbt;
    sparse_records(e.base);
    e.n_seeds = 5;
    e.sweep.population = {10, 100, 1000};
    e.sweep.swap = {false, true};
  } else if (name == "rl-reinforce-ol") {
    e.base = rl_base();
    e.base.population = 10;
    e.base.outer.kind = OuterLoopKind::kReinforceOl;
    e.base.outer.ol_lr = 1.0;
    sparse_records(e.base);
    e.n_seeds = 5;
    e.sweep.interval = {1, 10};
  } else if (name == "rl-qlearning") {
    e.base = qlearning_base();
    e.n_seeds = 30;
  } else if (name == "rl-qlearning-swap") {
    e.base = qlearning_base();
    e.base.population = 10;
    e.base.swap = true;
    e.n_seeds = 30;
  } else if (name == "rl-beta-sweep") {
    e.base = rl_base();
    e.base.population = 100;
    e.base.outer.kind = OuterLoopKind::kPbt;
    sparse_records(e.base);
    e.n_seeds = 5;
    e.sweep.outer = {OuterLoopKind::kNone, OuterLoopKind::kPbt};
    e.sweep.beta = {-0.5, 0.0, 0.5};
  } else if (name == "contentrec-pair") {
    e.base = content_base();
    e.n_seeds = 20;
    e.sweep.outer = {OuterLoopKind::kNone, OuterLoopKind::kPbtExploitOnly};
  } else if (name == "contentrec-swap") {
    e.base = content_base();
    e.n_seeds = 20;
    e.sweep.outer = {OuterLoopKind::kNone, OuterLoopKind::kPbtExploitOnly};
    e.sweep.swap = {false, true};
  } else if (name == "contentrec-alpha-grid") {
    e.base = content_base();
    e.n_seeds = 5;
    e.sweep.outer = {OuterLoopKind::kNone, OuterLoopKind::kPbtExploitOnly};
    e.sweep.alpha1 = {0.01, 0.1};
    e.sweep.alpha2 = {0.001, 0.01, 0.1};
  } else if (name == "appendix-3-2-walkthrough") {
    e.scenario = Scenario::kPbtWalkthrough;
    e.base = rl_base();
    e.base.population = 5;
    e.base.outer.kind = OuterLoopKind::kPbtExploitOnly;
    e.base.outer.interval = 1;
    e.n_seeds = 1;
    e.walkthrough_intervals = 10;
  } else {
    std::string known;
    for (const auto& n : names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
  }
  return e;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

template <typename Enum>
Enum parse_enum(const std::string& field, const std::string& name,
                std::initializer_list<Enum> values) {
  std::string known;
  for (Enum v : values) {
    if (to_string(v) == name) return v;
    known += (known.empty() ? "" : ", ") + std::string(to_string(v));
  }
  throw ConfigError("field '" + field + "': unknown value '" + name + "' (expected one of " +
                    known + ")");
}

constexpr auto kEnvKinds = {EnvKind::kSl, EnvKind::kRl, EnvKind::kContent};
constexpr auto kLearnerKinds = {LearnerKind::kScalar, LearnerKind::kReinforce,
                                LearnerKind::kQLearning, LearnerKind::kMlp};
constexpr auto kInitialStates = {RlInitialState::kRandom, RlInitialState::kCooperate,
                                 RlInitialState::kDefect};
constexpr auto kLrInits = {LrInit::kFixed, LrInit::kLogUniform};
constexpr auto kAccuracyModes = {AccuracyMode::kSampled, AccuracyMode::kGreedy};
constexpr auto kOuterKinds = {OuterLoopKind::kNone, OuterLoopKind::kPbt,
                              OuterLoopKind::kPbtExploitOnly, OuterLoopKind::kReinforceOl};
constexpr auto kPerformanceKinds = {PerformanceKind::kFinalStepReward,
                                    PerformanceKind::kFinalStepNegLoss,
                                    PerformanceKind::kIntervalAccuracy};
constexpr auto kKlDirections = {KlDirection::kCurrentVsInitial, KlDirection::kInitialVsCurrent};
constexpr auto kScenarios = {Scenario::kTrials, Scenario::kPbtWalkthrough};

/// Walks one JSON object, consuming known keys and complaining about the rest.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError("field '" + display() + "': expected an object");
  }

  bool has(const char* key) const { return node_.contains(key); }

  template <typename T>
  void read(const char* key, T& out) {
    auto it = node_.find(key);
    if (it == node_.end()) return;
    seen_.insert(key);
    out = convert<T>(*it, field(key));
  }

  template <typename Enum>
  void read_enum(const char* key, Enum& out, std::initializer_list<Enum> values) {
    if (!has(key)) return;
    std::string name;
    read(key, name);
    out = parse_enum(field(key), name, values);
  }

  Section child(const char* key) {
    seen_.insert(key);
    return Section(node_.at(key), field(key));
  }

  /// Throws for the first key (in sorted order) nobody asked for.
  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown field '" + field(key.c_str()) + "'");
    }
  }

  std::string field(const char* key) const {
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }

  template <typename T>
  static T convert(const json& v, const std::string& field) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("field '" + field + "': expected true or false");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError("field '" + field + "': expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError("field '" + field + "': expected a number");
      return v.get<T>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_unsigned()) {
        throw ConfigError("field '" + field + "': expected a non-negative integer");
      }
      return static_cast<T>(v.get<std::uint64_t>());
    } else {
      if (!v.is_array()) throw ConfigError("field '" + field + "': expected a list");
      T out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(convert<typename T::value_type>(v[i], field + "[" + std::to_string(i) + "]"));
      }
      return out;
    }
  }

 private:
  std::string display() const { return path_.empty() ? "<root>" : path_; }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Enum>
std::vector<Enum> parse_enum_list(Section& s, const char* key, std::initializer_list<Enum> values) {
  std::vector<std::string> names;
  s.read(key, names);
  std::vector<Enum> out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    out.push_back(parse_enum(s.field(key) + "[" + std::to_string(i) + "]", names[i], values));
  }
  return out;
}

void apply_overrides(ExperimentConfig& e, const json& root) {
  Section top(root, "");
  std::string ignored_preset;
  top.read("preset", ignored_preset);
  top.read_enum("scenario", e.scenario, kScenarios);
  top.read("seed", e.seed);
  top.read("seeds", e.n_seeds);
  TrialConfig& c = e.base;
  top.read("population", c.population);
  top.read("steps", c.steps);
  top.read("swap", c.swap);

  bool performance_given = false;
  bool env_changed = false;
  if (top.has("env")) {
    Section s = top.child("env");
    const EnvKind before = c.env;
    s.read_enum("kind", c.env, kEnvKinds);
    env_changed = c.env != before;
    s.read("beta", c.beta);
    s.read_enum("initial_state", c.rl_initial_state, kInitialStates);
    s.read("sigma", c.sigma);
    s.read("n_users", c.content.n_users);
    s.read("n_articles", c.content.n_articles);
    s.read("alpha1", c.content.alpha1);
    s.read("alpha2", c.content.alpha2);
    s.read("loyalty_init_std", c.content.loyalty_init_std);
    s.read("interest_init_std", c.content.interest_init_std);
    s.finish();
  }
  if (top.has("learner")) {
    Section s = top.child("learner");
    s.read_enum("kind", c.learner, kLearnerKinds);
    s.read_enum("lr_init", c.lr_init, kLrInits);
    s.read("lr", c.lr);
    s.read("lr_min", c.lr_min);
    s.read("lr_max", c.lr_max);
    s.read("theta_init_std", c.theta_init_std);
    s.read("scalar_init_std", c.scalar_init_std);
    s.read("epsilon", c.epsilon);
    s.read("synthetic_memory", c.synthetic_memory);
    s.read("hidden", c.hidden);
    s.read("momentum", c.momentum);
    s.read("init_scale", c.mlp_init_scale);
    s.read_enum("accuracy", c.accuracy, kAccuracyModes);
    s.finish();
  }
  if (top.has("outer")) {
    Section s = top.child("outer");
    s.read_enum("kind", c.outer.kind, kOuterKinds);
    s.read("interval", c.outer.interval);
    s.read("exploit_fraction", c.outer.exploit_fraction);
    if (s.has("perturb_factors")) {
      std::vector<double> f;
      s.read("perturb_factors", f);
      if (f.size() != 2) throw ConfigError("field 'outer.perturb_factors': expected two numbers");
      c.outer.perturb_factors = {f[0], f[1]};
    }
    s.read("ol_lr", c.outer.ol_lr);
    performance_given = s.has("performance");
    s.read_enum("performance", c.performance, kPerformanceKinds);
    s.finish();
  }
  if (env_changed && !performance_given) c.set_default_performance();
  if (top.has("record")) {
    Section s = top.child("record");
    s.read("steps", c.record_steps);
    s.read("stride", c.record_stride);
    s.read("learners", c.record_learners);
    s.read("summary_window", c.summary_window);
    s.read("accuracy_window", c.accuracy_window);
    s.read_enum("kl_direction", c.kl_direction, kKlDirections);
    s.read("saturation_threshold", c.saturation_threshold);
    s.finish();
  }
  if (top.has("sweep")) {
    Section s = top.child("sweep");
    SweepAxes& ax = e.sweep;
    ax = SweepAxes{};
    s.read("population", ax.population);
    s.read("interval", ax.interval);
    s.read("beta", ax.beta);
    s.read("swap", ax.swap);
    s.read("alpha1", ax.alpha1);
    s.read("alpha2", ax.alpha2);
    ax.outer = parse_enum_list(s, "outer", kOuterKinds);
    s.finish();
  }
  if (top.has("report")) {
    Section s = top.child("report");
    s.read("failure_threshold", e.failure_threshold);
    s.finish();
  }
  if (top.has("walkthrough")) {
    Section s = top.child("walkthrough");
    s.read("intervals", e.walkthrough_intervals);
    s.finish();
  }
  top.finish();
}

template <typename Enum>
json enum_list(const std::vector<Enum>& v) {
  json out = json::array();
  for (Enum x : v) out.push_back(std::string(to_string(x)));
  return out;
}

json to_json(const ExperimentConfig& e) {
  const TrialConfig& c = e.base;
  json j;
  j["scenario"] = std::string(to_string(e.scenario));
  j["seed"] = e.seed;
  j["seeds"] = e.n_seeds;
  j["population"] = c.population;
  j["steps"] = c.steps;
  j["swap"] = c.swap;
  j["env"] = {{"kind", std::string(to_string(c.env))},
              {"beta", c.beta},
              {"initial_state", std::string(to_string(c.rl_initial_state))},
              {"sigma", c.sigma},
              {"n_users", c.content.n_users},
              {"n_articles", c.content.n_articles},
              {"alpha1", c.content.alpha1},
              {"alpha2", c.content.alpha2},
              {"loyalty_init_std", c.content.loyalty_init_std},
              {"interest_init_std", c.content.interest_init_std}};
  j["learner"] = {{"kind", std::string(to_string(c.learner))},
                  {"lr_init", std::string(to_string(c.lr_init))},
                  {"lr", c.lr},
                  {"lr_min", c.lr_min},
                  {"lr_max", c.lr_max},
                  {"theta_init_std", c.theta_init_std},
                  {"scalar_init_std", c.scalar_init_std},
                  {"epsilon", c.epsilon},
                  {"synthetic_memory", c.synthetic_memory},
                  {"hidden", c.hidden},
                  {"momentum", c.momentum},
                  {"init_scale", c.mlp_init_scale},
                  {"accuracy", std::string(to_string(c.accuracy))}};
  j["outer"] = {{"kind", std::string(to_string(c.outer.kind))},
                {"interval", c.outer.interval},
                {"exploit_fraction", c.outer.exploit_fraction},
                {"perturb_factors", {c.outer.perturb_factors.first, c.outer.perturb_factors.second}},
                {"ol_lr", c.outer.ol_lr},
                {"performance", std::string(to_string(c.performance))}};
  j["record"] = {{"steps", c.record_steps},
                 {"stride", c.record_stride},
                 {"learners", c.record_learners},
                 {"summary_window", c.summary_window},
                 {"accuracy_window", c.accuracy_window},
                 {"kl_direction", std::string(to_string(c.kl_direction))},
                 {"saturation_threshold", c.saturation_threshold}};
  const SweepAxes& ax = e.sweep;
  j["sweep"] = {{"population", ax.population}, {"interval", ax.interval},
                {"beta", ax.beta},             {"swap", ax.swap},
                {"alpha1", ax.alpha1},         {"alpha2", ax.alpha2},
                {"outer", enum_list(ax.outer)}};
  j["report"] = {{"failure_threshold", e.failure_threshold}};
  j["walkthrough"] = {{"intervals", e.walkthrough_intervals}};
  return j;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("malformed JSON: ") + err.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig e;
  if (auto it = root.find("preset"); it != root.end()) {
    if (!it->is_string()) throw ConfigError("field 'preset': expected a string");
    e = preset(it->get<std::string>());
  } else {
    e.base.set_default_performance();
  }
  apply_overrides(e, root);
  e.validate();
  return e;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string canonical_json(const ExperimentConfig& cfg) { return to_json(cfg).dump(); }

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_json(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace adslab
