#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace subdiff {

// Philox4x32-10 counter-based random generator. A (seed, stream) pair fully
// determines the sequence, so parallel replicates get independent,
// platform-reproducible streams by using the replicate index as the stream.
// The 128-bit counter is split as (block_lo, block_hi, stream_lo, stream_hi)
// and the 64-bit key holds the seed.
class Philox {
 public:
  Philox(uint64_t seed, uint64_t stream);

  // Raw 4x32-bit block for the current counter (advances the counter).
  std::array<uint32_t, 4> next_block();

  uint32_t next_u32();
  uint64_t next_u64();
  // Uniform double in the half-open interval (0, 1] (never exactly zero, so
  // logarithms are safe).
  double next_unit_positive();
  // Uniform double in [0, 1).
  double next_unit();

  // One full-round keyed permutation, exposed for known-answer tests.
  static std::array<uint32_t, 4> block(const std::array<uint32_t, 4>& counter,
                                       const std::array<uint32_t, 2>& key);

 private:
  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 4> counter_;
  std::array<uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;  // empty
};

// Exact binomial sample with n trials and success probability p, by
// geometric waiting-time skips: the gap to the next success is
// 1 + floor(log(U) / log(1-p)), which inverts the geometric CDF exactly.
// Cost is O(n*p) expected, independent of n otherwise.
uint64_t binomial_draw(Philox& gen, uint64_t n, double p);

// Exact multinomial sample over `probs` (which may sum to less than 1; the
// remainder is returned as the final "other" cell). Drawn as a chain of
// conditional binomials, equivalent to n independent categorical trials.
std::vector<uint64_t> multinomial_draw(Philox& gen, uint64_t n,
                                       const std::vector<double>& probs);

}  // namespace subdiff
