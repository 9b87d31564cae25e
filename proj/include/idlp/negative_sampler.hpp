#pragma once

#include <cstdint>
#include <random>

#include "idlp/types.hpp"

namespace idlp {

// Corrupts positives by replacing the head or the tail with a different
// entity drawn uniformly from the replaced entity's own domain.
class NegativeSampler {
 public:
  enum class Side { kHead, kTail };

  NegativeSampler(std::size_t entities1, std::size_t entities2, std::uint64_t seed)
      : counts_{entities1, entities2}, rng_(seed) {}

  // Throws DataError if the replaced entity's domain has fewer than 2 entities.
  TaggedTriplet corrupt(const TaggedTriplet& positive, Side side);

  // Head or tail with probability 1/2 each.
  TaggedTriplet corrupt(const TaggedTriplet& positive);

  std::mt19937_64& engine() { return rng_; }

 private:
  EntityId draw_other(Domain d, EntityId original);

  std::size_t counts_[2];
  std::mt19937_64 rng_;
};

}  // namespace idlp
