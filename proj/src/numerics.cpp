#include "adslab/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace adslab {

std::vector<double> softmax(std::span<const double> v) {
  if (v.empty()) throw Error("softmax: empty input");
  double max = v[0];
  for (double x : v) {
    if (!std::isfinite(x)) throw Error("softmax: non-finite input");
    max = std::max(max, x);
  }
  std::vector<double> out(v.size());
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - max);
    total += out[i];
  }
  for (double& x : out) x /= total;
  return out;
}

std::size_t sample_categorical(std::span<const double> p, RngStream& rng) {
  if (p.empty()) throw Error("sample_categorical: empty distribution");
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw Error("sample_categorical: negative or NaN probability");
    total += x;
  }
  if (total <= 0.0) throw Error("sample_categorical: all-zero distribution");
  if (std::abs(total - 1.0) > 1e-9) throw Error("sample_categorical: probabilities do not sum to 1");

  const double u = rng.uniform() * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    last_positive = i;
    cumulative += p[i];
    if (u < cumulative) return i;
  }
  // Round-off can leave u just above the final cumulative sum.
  return last_positive;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double l2_norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

double cosine_distance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error("cosine_distance: length mismatch");
  const double nu = l2_norm(u);
  const double nv = l2_norm(v);
  if (nu == 0.0 || nv == 0.0) throw Error("cosine_distance: zero-norm input");
  double dot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
  const double cos = std::clamp(dot / (nu * nv), -1.0, 1.0);
  return 1.0 - cos;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error("kl_divergence: length mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] <= 0.0) throw Error("kl_divergence: q has no mass where p does");
    kl += p[i] * std::log(p[i] / q[i]);
  }
  // Round-off can produce tiny negative values for p close to q.
  return std::max(kl, 0.0);
}

std::vector<double> one_hot(std::size_t index, std::size_t width) {
  if (index >= width) throw Error("one_hot: index out of range");
  std::vector<double> v(width, 0.0);
  v[index] = 1.0;
  return v;
}

}  // namespace adslab
