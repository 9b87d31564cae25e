#pragma once

#include <cstdint>

#include "idlp/domain_pair.hpp"
#include "idlp/triplet_store.hpp"

namespace idlp {

struct OverlapSpec {
  double level = 0.0;           // fraction of target_size shared by both domains
  std::size_t target_size = 0;  // entities per sub-graph
  std::uint64_t seed = 0;
};

// Fraction of each intra-domain pool held out as intra_test, and the share of
// the cross-domain pool used for validation (the rest is test).
inline constexpr double kIntraTestFraction = 0.05;
inline constexpr double kInterValidFraction = 0.20;

// Number of shared entities for a spec: round(level * target_size).
std::size_t common_count(const OverlapSpec& spec);

// Draws two induced sub-graphs of `target_size` entities each from `source`.
//
// Common entities are drawn first, then each domain is filled with distinct
// exclusive entities. A fact whose endpoints both lie in one domain goes to
// that domain's pool (facts between two common entities go to a domain picked
// by a fair coin); a fact joining the exclusive parts of both domains goes to
// the cross-domain pool. Predicates missing from either domain's pool are
// dropped everywhere and the remainder is re-indexed in source order. Finally
// the intra pools lose kIntraTestFraction to intra_test and the cross-domain
// pool is split into validation and test.
//
// Throws DataError if the source has fewer than 2 * target_size entities and
// ConfigError for an invalid spec.
DomainPair sample_domain_pair(const Graph& source, const OverlapSpec& spec);

}  // namespace idlp
