#include "subdiff/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "subdiff/real.hpp"

namespace subdiff {

namespace {
constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
  const uint64_t p = static_cast<uint64_t>(a) * b;
  hi = static_cast<uint32_t>(p >> 32);
  lo = static_cast<uint32_t>(p);
}
}  // namespace

std::array<uint32_t, 4> Philox::block(const std::array<uint32_t, 4>& counter,
                                      const std::array<uint32_t, 2>& key) {
  std::array<uint32_t, 4> x = counter;
  std::array<uint32_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, x[0], hi0, lo0);
    mulhilo(kMul1, x[2], hi1, lo1);
    x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return x;
}

Philox::Philox(uint64_t seed, uint64_t stream) {
  key_ = {static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)};
  counter_ = {0, 0, static_cast<uint32_t>(stream),
              static_cast<uint32_t>(stream >> 32)};
}

std::array<uint32_t, 4> Philox::next_block() {
  const auto out = block(counter_, key_);
  if (++counter_[0] == 0) ++counter_[1];  // 64-bit block index per stream
  return out;
}

uint32_t Philox::next_u32() {
  if (buffer_pos_ == 4) {
    buffer_ = next_block();
    buffer_pos_ = 0;
  }
  return buffer_[buffer_pos_++];
}

uint64_t Philox::next_u64() {
  const uint64_t lo = next_u32();
  const uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double Philox::next_unit_positive() {
  // 53 random bits mapped to ((r + 1) / 2^53) in (0, 1].
  const uint64_t r = next_u64() >> 11;
  return static_cast<double>(r + 1) * 0x1.0p-53;
}

double Philox::next_unit() {
  const uint64_t r = next_u64() >> 11;
  return static_cast<double>(r) * 0x1.0p-53;
}

uint64_t binomial_draw(Philox& gen, uint64_t n, double p) {
  if (p < 0 || p > 1 || !std::isfinite(p))
    throw ConfigError("binomial probability must be in [0, 1]");
  if (p == 0 || n == 0) return 0;
  if (p == 1) return n;
  const double log_q = std::log1p(-p);
  uint64_t count = 0;
  // Position after the most recent success; skip geometrically distributed
  // gaps until the trials are exhausted.
  double consumed = 0;
  while (true) {
    const double u = gen.next_unit_positive();
    const double skip = std::floor(std::log(u) / log_q) + 1.0;
    consumed += skip;
    if (consumed > static_cast<double>(n)) return count;
    ++count;
  }
}

std::vector<uint64_t> multinomial_draw(Philox& gen, uint64_t n,
                                       const std::vector<double>& probs) {
  double total = 0;
  for (double p : probs) {
    if (p < 0 || !std::isfinite(p))
      throw ConfigError("multinomial probabilities must be nonnegative");
    total += p;
  }
  if (total > 1.0 + 1e-10)
    throw ConfigError("multinomial probabilities exceed 1");

  std::vector<uint64_t> counts(probs.size() + 1, 0);
  uint64_t remaining = n;
  double remaining_p = 1.0;
  for (size_t k = 0; k < probs.size(); ++k) {
    if (remaining == 0) break;
    const double cond =
        remaining_p > 0 ? std::min(probs[k] / remaining_p, 1.0) : 0.0;
    const uint64_t c = binomial_draw(gen, remaining, cond);
    counts[k] = c;
    remaining -= c;
    remaining_p -= probs[k];
  }
  counts.back() = remaining;  // "other": no photon or unmeasured mode
  return counts;
}

}  // namespace subdiff
