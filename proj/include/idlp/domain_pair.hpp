#pragma once

#include <cstdint>
#include <vector>

#include "idlp/triplet_store.hpp"
#include "idlp/types.hpp"
#include "idlp/vocab.hpp"

namespace idlp {

// One entity known in both domains: its id in domain 1 and in domain 2.
struct CommonPair {
  EntityId first = 0;
  EntityId second = 0;

  auto operator<=>(const CommonPair&) const = default;
};

// Two graphs over a shared predicate set, with the split protocol applied.
// Triplet ids are local to the vocabulary of each endpoint's domain.
struct DomainPair {
  EntityVocab entities1;
  EntityVocab entities2;
  PredicateVocab predicates;
  std::vector<CommonPair> common;

  TripletStore train1;
  TripletStore train2;
  TaggedStore intra_test;   // intra-domain facts held out from training
  TaggedStore inter_valid;  // cross-domain facts used for model selection
  TaggedStore inter_test;

  // Provenance recorded in meta.txt.
  double overlap_level = 0.0;
  std::size_t target_size = 0;
  std::uint64_t seed = 0;

  const EntityVocab& entities(Domain d) const { return d == Domain::kFirst ? entities1 : entities2; }
  std::size_t entity_count(Domain d) const { return entities(d).size(); }
  const TripletStore& train(Domain d) const { return d == Domain::kFirst ? train1 : train2; }

  bool operator==(const DomainPair&) const = default;
};

// Checks every structural invariant (id ranges, tagging, unique common
// pairs, split disjointness). Throws DataError describing the first failure.
void validate(const DomainPair& pair);

}  // namespace idlp
