#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "resamp/rational.hpp"

namespace resamp {

// SplitMix64 generator.  Cheap to seed, so every trial gets its own stream.
struct SplitMix64 {
  uint64_t state = 0;

  SplitMix64() = default;
  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform value in [0, bound) by rejection from the top of the range.
  uint64_t below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("below: bound must be positive");
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }
};

// Derives an independent stream seed from a base seed and a stream index.
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  SplitMix64 g(seed);
  SplitMix64 h(g.next() ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
  return h.next();
}

// Samples from a fixed rational distribution using one 64-bit draw.  Cutoff i
// is ceil(c_i * 2^64) for the cumulative probability c_i, so state i is chosen
// exactly when the draw u satisfies u < ceil(c_i * 2^64) and u >= the previous
// cutoff.  The final cumulative value 1 would need cutoff 2^64; falling back
// to the last entry realizes it without overflow.
class RowSampler {
 public:
  RowSampler() = default;

  explicit RowSampler(const std::vector<std::pair<int, Rat>>& entries) {
    static_assert(sizeof(unsigned long) == 8, "needs 64-bit unsigned long");
    if (entries.empty()) throw std::invalid_argument("RowSampler: empty distribution");
    Rat cum = 0;
    for (const auto& [state, prob] : entries) {
      if (prob <= 0) throw std::invalid_argument("RowSampler: probabilities must be positive");
      cum += prob;
      states_.push_back(state);
      if (states_.size() < entries.size()) {
        mpz_class k = (cum.get_num() << 64) + cum.get_den() - 1;
        k /= cum.get_den();
        cutoffs_.push_back(k.get_ui());
      }
    }
    if (cum != 1) throw std::invalid_argument("RowSampler: probabilities must sum to 1");
  }

  bool valid() const { return !states_.empty(); }

  int sample(uint64_t u) const {
    for (size_t i = 0; i < cutoffs_.size(); ++i)
      if (u < cutoffs_[i]) return states_[i];
    return states_.back();
  }

  int sample(SplitMix64& gen) const { return sample(gen.next()); }

 private:
  std::vector<int> states_;
  std::vector<uint64_t> cutoffs_;
};

}  // namespace resamp
