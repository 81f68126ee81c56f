#pragma once

#include <cstdint>

namespace adslab {

/// One row per (learner, time-step).
///
/// `action` encodes the learner's output: 0/1 for cooperate/defect in the RL
/// test, 1 if the second prediction exceeded 0.5 in the SL test, and the
/// recommended article in content recommendation. `reward` holds the reward
/// (RL) or the loss (SL, content). `extra` holds the cooperation flag (RL),
/// the second prediction (SL) or the correctness flag (content).
struct StepRecord {
  std::uint64_t trial = 0;
  std::uint64_t t = 0;
  std::uint32_t learner = 0;
  std::uint32_t env = 0;
  std::int64_t action = 0;
  double reward = 0.0;
  double extra = 0.0;
  bool correct = false;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

}  // namespace adslab
