#include "idlp/negative_sampler.hpp"

#include <string>

namespace idlp {

EntityId NegativeSampler::draw_other(Domain d, EntityId original) {
  const std::size_t n = counts_[index(d)];
  if (n < 2) {
    throw DataError("cannot corrupt inside domain " + std::to_string(tag(d)) + " with " +
                    std::to_string(n) + " entities");
  }
  // Uniform over the n - 1 entities other than the original.
  std::uniform_int_distribution<std::size_t> pick(0, n - 2);
  auto e = static_cast<EntityId>(pick(rng_));
  return e >= original ? e + 1 : e;
}

TaggedTriplet NegativeSampler::corrupt(const TaggedTriplet& positive, Side side) {
  TaggedTriplet neg = positive;
  if (side == Side::kHead) {
    neg.fact.head = draw_other(positive.head_domain, positive.fact.head);
  } else {
    neg.fact.tail = draw_other(positive.tail_domain, positive.fact.tail);
  }
  return neg;
}

TaggedTriplet NegativeSampler::corrupt(const TaggedTriplet& positive) {
  std::bernoulli_distribution head(0.5);
  return corrupt(positive, head(rng_) ? Side::kHead : Side::kTail);
}

}  // namespace idlp
