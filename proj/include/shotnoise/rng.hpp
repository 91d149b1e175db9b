#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace shotnoise {

/// Counter-based random stream: Philox4x32-10 keyed by the seed, with the
/// stream id in the upper half of the 128-bit counter. The pair
/// (seed, stream_id) fixes the whole sequence, and distinct stream ids give
/// non-overlapping counter ranges. A stream is a small value type, so copying
/// it snapshots its position.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  /// Independent stream for a sub-purpose of the same entity (jumps vs
  /// diffusion of one path). Lane 0 is the stream itself.
  RngStream lane(std::uint32_t lane_id) const;

  std::uint64_t next_u64();
  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Exponential with the given rate, by inverse CDF.
  double exponential(double rate);
  /// Standard normal (Box–Muller, second variate cached).
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;  // low 64 bits of the counter; top 8 bits hold the lane
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Stream reserved for estimator subsampling: (seed, 2^63 + k).
RngStream estimator_stream(std::uint64_t seed, std::uint64_t k);

}  // namespace shotnoise
