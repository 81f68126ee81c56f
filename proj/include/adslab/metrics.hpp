#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "adslab/numerics.hpp"

namespace adslab {

enum class KlDirection { kCurrentVsInitial, kInitialVsCurrent };

std::string_view to_string(KlDirection d);

/// Drift of the environment copy a learner inhabits at time t, plus that
/// learner's recent accuracy.
struct DriftSnapshot {
  std::uint64_t trial = 0;
  std::uint64_t t = 0;
  std::uint32_t learner = 0;
  std::uint32_t env = 0;
  double accuracy = 0.0;
  double concept_shift = 0.0;
  double covariate_shift = 0.0;

  friend bool operator==(const DriftSnapshot&, const DriftSnapshot&) = default;
};

/// Mean over user types of the cosine distance between initial and current
/// interest rows.
double concept_shift(const Matrix& w_init, const Matrix& w_now);

/// KL divergence between the current and initial user distributions,
/// softmax(g_now) and softmax(g_init). Direction configurable.
double covariate_shift(std::span<const double> g_init, std::span<const double> g_now,
                       KlDirection direction = KlDirection::kCurrentVsInitial);

struct ShiftBucket {
  double accuracy_lo = 0.0;  // bucket covers [lo, lo + width)
  double accuracy_hi = 0.0;
  std::size_t count = 0;
  double mean_concept_shift = 0.0;
  double mean_covariate_shift = 0.0;
};

/// Buckets snapshots by accuracy into fixed-width bins and averages both
/// shifts per bin. Empty bins are omitted. Throws on empty input.
std::vector<ShiftBucket> shift_vs_accuracy_curve(std::span<const DriftSnapshot> snapshots,
                                                 double bin_width = 0.05);

}  // namespace adslab
