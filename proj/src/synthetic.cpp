#include "idlp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "idlp/sampling.hpp"

namespace idlp {
namespace {

std::vector<bool> choose_subset(std::size_t n, double fraction, std::mt19937_64& rng) {
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> chosen(n, false);
  for (std::size_t i = 0; i < k; ++i) chosen[order[i]] = true;
  return chosen;
}

}  // namespace

Graph make_block_graph(const BlockGraphSpec& spec) {
  if (spec.entities < 2 || spec.predicates < 1 || spec.clusters < 1 ||
      spec.clusters > spec.entities) {
    throw ConfigError("block graph needs >= 2 entities, >= 1 predicate and 1..entities clusters");
  }
  std::mt19937_64 rng(spec.seed);
  Graph g;
  for (std::size_t i = 0; i < spec.entities; ++i) g.entities.add("e" + std::to_string(i));
  for (std::size_t k = 0; k < spec.predicates; ++k) g.predicates.add("r" + std::to_string(k));

  // Cluster c holds entities [begin[c], begin[c+1]).
  std::vector<std::size_t> begin(spec.clusters + 1);
  for (std::size_t c = 0; c <= spec.clusters; ++c) begin[c] = c * spec.entities / spec.clusters;
  auto cluster_of = [&](std::size_t e) {
    return static_cast<std::size_t>(std::upper_bound(begin.begin(), begin.end(), e) - begin.begin()) - 1;
  };

  std::poisson_distribution<int> degree(spec.mean_out_degree);
  std::bernoulli_distribution is_noise(spec.noise);
  std::uniform_int_distribution<std::size_t> any(0, spec.entities - 1);
  for (std::size_t k = 0; k < spec.predicates; ++k) {
    std::vector<std::size_t> target(spec.clusters);
    std::iota(target.begin(), target.end(), std::size_t{0});
    std::shuffle(target.begin(), target.end(), rng);
    for (std::size_t h = 0; h < spec.entities; ++h) {
      const std::size_t b = target[cluster_of(h)];
      std::uniform_int_distribution<std::size_t> in_block(begin[b], begin[b + 1] - 1);
      for (int i = degree(rng); i > 0; --i) {
        const std::size_t t = is_noise(rng) ? any(rng) : in_block(rng);
        if (t != h) g.facts.insert({static_cast<EntityId>(h), static_cast<PredicateId>(k),
                                    static_cast<EntityId>(t)});
      }
    }
  }
  return g;
}

DomainPair make_planted_pair(const PlantedSpec& spec) {
  if (!(spec.overlap >= 0.0 && spec.overlap < 1.0)) throw ConfigError("overlap must lie in [0, 1)");
  if (!(spec.dropout >= 0.0 && spec.dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  const Graph truth = make_block_graph(spec.truth);
  const std::size_t n = truth.entities.size();
  std::mt19937_64 rng(spec.seed);

  const auto is_common = choose_subset(
      n, static_cast<double>(std::llround(spec.overlap * static_cast<double>(n))) / static_cast<double>(n),
      rng);

  DomainPair pair;
  pair.overlap_level = spec.overlap;
  pair.target_size = n;
  pair.seed = spec.seed;
  pair.predicates = truth.predicates;
  for (EntityId e = 0; e < n; ++e) {
    const auto& name = truth.entities.name(e);
    pair.entities1.add(is_common[e] ? name : name + "@1");
    pair.entities2.add(is_common[e] ? name : name + "@2");
    if (is_common[e]) pair.common.push_back({e, e});
  }

  std::bernoulli_distribution keep(1.0 - spec.dropout);
  std::bernoulli_distribution coin(0.5);
  std::vector<Triplet> pool1, pool2;
  std::vector<TaggedTriplet> cross;
  for (const auto& f : truth.facts) {
    if (is_common[f.head] && is_common[f.tail]) {
      auto& pool = coin(rng) ? pool2 : pool1;
      if (keep(rng)) pool.push_back(f);
      continue;
    }
    if (keep(rng)) pool1.push_back(f);
    if (keep(rng)) pool2.push_back(f);
    if (!is_common[f.head] && !is_common[f.tail]) {
      cross.push_back({f, Domain::kFirst, Domain::kSecond});
      cross.push_back({f, Domain::kSecond, Domain::kFirst});
    }
  }

  auto split_intra = [&](const std::vector<Triplet>& pool, Domain d, TripletStore& train) {
    const auto held_out = choose_subset(pool.size(), kIntraTestFraction, rng);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (held_out[i]) {
        pair.intra_test.insert(intra(d, pool[i]));
      } else {
        train.insert(pool[i]);
      }
    }
  };
  split_intra(pool1, Domain::kFirst, pair.train1);
  split_intra(pool2, Domain::kSecond, pair.train2);

  const auto valid = choose_subset(cross.size(), kInterValidFraction, rng);
  for (std::size_t i = 0; i < cross.size(); ++i) {
    (valid[i] ? pair.inter_valid : pair.inter_test).insert(cross[i]);
  }
  return pair;
}

}  // namespace idlp
