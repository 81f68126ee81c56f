#include "adslab/metrics.hpp"

#include <cmath>
#include <map>

namespace adslab {

std::string_view to_string(KlDirection d) {
  return d == KlDirection::kCurrentVsInitial ? "current_vs_initial" : "initial_vs_current";
}

double concept_shift(const Matrix& w_init, const Matrix& w_now) {
  if (w_init.rows() != w_now.rows() || w_init.cols() != w_now.cols()) {
    throw Error("concept_shift: shape mismatch");
  }
  if (w_init.rows() == 0) throw Error("concept_shift: empty matrix");
  double total = 0.0;
  for (std::size_t r = 0; r < w_init.rows(); ++r) total += cosine_distance(w_init.row(r), w_now.row(r));
  return total / static_cast<double>(w_init.rows());
}

double covariate_shift(std::span<const double> g_init, std::span<const double> g_now,
                       KlDirection direction) {
  if (g_init.size() != g_now.size()) throw Error("covariate_shift: length mismatch");
  const auto p_init = softmax(g_init);
  const auto p_now = softmax(g_now);
  return direction == KlDirection::kCurrentVsInitial ? kl_divergence(p_now, p_init)
                                                     : kl_divergence(p_init, p_now);
}

std::vector<ShiftBucket> shift_vs_accuracy_curve(std::span<const DriftSnapshot> snapshots,
                                                 double bin_width) {
  if (snapshots.empty()) throw Error("shift_vs_accuracy_curve: no snapshots");
  if (!(bin_width > 0.0)) throw Error("shift_vs_accuracy_curve: bin width must be positive");
  struct Acc {
    std::size_t n = 0;
    double concept_sum = 0.0;
    double covariate = 0.0;
  };
  std::map<long long, Acc> bins;
  for (const auto& s : snapshots) {
    // Nudge so values sitting exactly on an edge land in the upper bin
    // despite binary round-off (e.g. 0.15 / 0.05 = 2.9999999999999996).
    auto b = static_cast<long long>(std::floor(s.accuracy / bin_width + 1e-9));
    // perfect accuracy belongs to the top bin, not one starting at 1
    if (s.accuracy >= 1.0) b = static_cast<long long>(std::ceil(1.0 / bin_width - 1e-9)) - 1;
    auto& acc = bins[b];
    acc.n += 1;
    acc.concept_sum += s.concept_shift;
    acc.covariate += s.covariate_shift;
  }
  // Widths like 0.05 are 1/20; dividing by 20 gives cleaner edges (0.15, not
  // 0.15000000000000002) than multiplying by 0.05.
  const double per_unit = std::round(1.0 / bin_width);
  const bool reciprocal = std::abs(1.0 / bin_width - per_unit) < 1e-9;
  auto edge = [&](long long b) {
    return reciprocal ? static_cast<double>(b) / per_unit : static_cast<double>(b) * bin_width;
  };
  std::vector<ShiftBucket> out;
  out.reserve(bins.size());
  for (const auto& [b, acc] : bins) {
    ShiftBucket bucket;
    bucket.accuracy_lo = edge(b);
    bucket.accuracy_hi = edge(b + 1);
    bucket.count = acc.n;
    bucket.mean_concept_shift = acc.concept_sum / static_cast<double>(acc.n);
    bucket.mean_covariate_shift = acc.covariate / static_cast<double>(acc.n);
    out.push_back(bucket);
  }
  return out;
}

}  // namespace adslab
