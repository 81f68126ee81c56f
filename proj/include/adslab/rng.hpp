#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace adslab {

/// What a random stream is used for. Part of the stream label, so two
/// roles on the same (trial, index) never share draws.
enum class StreamRole : std::uint32_t {
  kEnvInit = 1,
  kEnvStep = 2,
  kLearnerInit = 3,
  kLearnerAct = 4,
  kHyperInit = 5,
  kMeta = 6,
  kScript = 7,
};

struct StreamId {
  std::uint64_t trial = 0;
  std::uint64_t index = 0;
  StreamRole role = StreamRole::kMeta;

  friend bool operator==(const StreamId&, const StreamId&) = default;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// xoshiro256** keyed by (seed, StreamId). The key is hashed with splitmix64,
/// so a stream's sequence depends only on its label and never on the order in
/// which other streams were created or consumed.
class RngStream {
 public:
  RngStream(std::uint64_t seed, StreamId id);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

  /// Uniform integer on [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard normal via Box-Muller; always consumes exactly two uniforms.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  std::uint64_t seed() const { return seed_; }
  const StreamId& id() const { return id_; }

 private:
  std::uint64_t seed_;
  StreamId id_;
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace adslab
