#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "adslab/scheduler.hpp"

namespace adslab {

/// Raised for anything wrong with an experiment description. The CLI maps it
/// to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Scenario { kTrials, kPbtWalkthrough };

std::string_view to_string(Scenario s);

/// Sweep axes. An empty axis keeps the base value.
struct SweepAxes {
  std::vector<std::size_t> population;
  std::vector<std::size_t> interval;
  std::vector<double> beta;
  std::vector<bool> swap;
  std::vector<double> alpha1;
  std::vector<double> alpha2;
  std::vector<OuterLoopKind> outer;

  bool empty() const;
  std::size_t points() const;
};

struct ExperimentConfig {
  std::string preset;  // label only, not hashed
  Scenario scenario = Scenario::kTrials;
  TrialConfig base;
  std::uint64_t seed = 0;  // seed of replicate r is seed + r
  std::size_t n_seeds = 1;
  SweepAxes sweep;
  double failure_threshold = 0.5;
  std::size_t walkthrough_intervals = 10;

  void validate() const;
  std::vector<std::uint64_t> seeds() const;
};

/// One Cartesian-product point. Values are filled in even for axes that were
/// not swept so every row of the output is self-describing.
struct SweepPoint {
  std::size_t index = 0;
  TrialConfig config;  // identity fields unset
};

std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg);

/// All trials in output order: point-major, replicate-minor.
/// trial_id = point * n_seeds + replicate.
std::vector<TrialConfig> expand_trials(const ExperimentConfig& cfg);

/// Incentive regime of the RL test for a given beta.
std::string_view beta_label(double beta);

std::vector<std::string> preset_names();
/// Throws ConfigError for unknown names.
ExperimentConfig preset(std::string_view name);

/// Parses a JSON config. A "preset" key selects the starting point, the
/// remaining keys override it. Unknown keys are rejected with their full path.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);

/// Every semantic field, keys sorted, no whitespace.
std::string canonical_json(const ExperimentConfig& cfg);
/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace adslab
