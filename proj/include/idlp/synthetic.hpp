#pragma once

#include <cstdint>

#include "idlp/domain_pair.hpp"
#include "idlp/triplet_store.hpp"

namespace idlp {

// Stochastic block graph: entities are split evenly into clusters, and each
// predicate maps every cluster to one target cluster (a seeded random
// permutation per predicate). Every entity emits Poisson(mean_out_degree)
// edges per predicate; a tail is drawn from the mapped cluster, or from the
// whole graph with probability `noise`.
struct BlockGraphSpec {
  std::size_t entities = 300;
  std::size_t predicates = 8;
  std::size_t clusters = 6;
  double mean_out_degree = 1.5;
  double noise = 0.05;
  std::uint64_t seed = 0;
};

// Entities are named "e<i>" and predicates "r<k>".
Graph make_block_graph(const BlockGraphSpec& spec);

// Two noisy copies of one ground-truth graph with planted correspondence.
//
// Every ground-truth entity exists in both domains. A fraction `overlap` of
// them is marked common and tied across domains; the others are named
// "e<i>@1" / "e<i>@2". Each domain keeps every ground-truth fact between its
// entities independently with probability 1 - dropout. Facts between two
// common entities are kept once, in a domain picked by a fair coin. For each
// ground-truth fact between non-common entities, both cross-domain versions
// (head in domain 1 / tail in domain 2 and the reverse) form the cross-domain
// pool. The usual split fractions are then applied.
struct PlantedSpec {
  BlockGraphSpec truth;
  double overlap = 0.03;
  double dropout = 0.3;
  std::uint64_t seed = 0;
};

DomainPair make_planted_pair(const PlantedSpec& spec);

}  // namespace idlp
