#include "idlp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace idlp {
namespace {

enum class Role : std::uint8_t { kNone, kFirstOnly, kSecondOnly, kCommon };

bool in_domain(Role r, Domain d) {
  if (r == Role::kCommon) return true;
  return d == Domain::kFirst ? r == Role::kFirstOnly : r == Role::kSecondOnly;
}

// Marks round(fraction * n) positions chosen uniformly without replacement.
std::vector<bool> choose_subset(std::size_t n, double fraction, std::mt19937_64& rng) {
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> chosen(n, false);
  for (std::size_t i = 0; i < k; ++i) chosen[order[i]] = true;
  return chosen;
}

struct InterFact {
  Triplet fact;  // source ids
  Domain head_domain;
};

}  // namespace

std::size_t common_count(const OverlapSpec& spec) {
  return static_cast<std::size_t>(std::llround(spec.level * static_cast<double>(spec.target_size)));
}

DomainPair sample_domain_pair(const Graph& source, const OverlapSpec& spec) {
  if (!(spec.level >= 0.0 && spec.level < 1.0)) {
    throw ConfigError("overlap level must lie in [0, 1), got " + std::to_string(spec.level));
  }
  if (spec.target_size < 2) throw ConfigError("target size must be at least 2");
  const std::size_t n = source.entities.size();
  if (n < 2 * spec.target_size) {
    throw DataError("source graph has " + std::to_string(n) + " entities; need at least " +
                    std::to_string(2 * spec.target_size));
  }

  std::mt19937_64 rng(spec.seed);
  const std::size_t n_common = common_count(spec);
  const std::size_t n_exclusive = spec.target_size - n_common;

  std::vector<EntityId> order(n);
  std::iota(order.begin(), order.end(), EntityId{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<Role> role(n, Role::kNone);
  for (std::size_t i = 0; i < n_common; ++i) role[order[i]] = Role::kCommon;
  for (std::size_t i = 0; i < n_exclusive; ++i) {
    role[order[n_common + i]] = Role::kFirstOnly;
    role[order[n_common + n_exclusive + i]] = Role::kSecondOnly;
  }

  // Pool facts by endpoint membership.
  std::vector<Triplet> pool1, pool2;
  std::vector<InterFact> inter;
  std::bernoulli_distribution coin(0.5);
  for (const auto& f : source.facts) {
    const Role rh = role[f.head], rt = role[f.tail];
    const bool both1 = in_domain(rh, Domain::kFirst) && in_domain(rt, Domain::kFirst);
    const bool both2 = in_domain(rh, Domain::kSecond) && in_domain(rt, Domain::kSecond);
    if (both1 && both2) {
      (coin(rng) ? pool2 : pool1).push_back(f);
    } else if (both1) {
      pool1.push_back(f);
    } else if (both2) {
      pool2.push_back(f);
    } else if (rh == Role::kFirstOnly && rt == Role::kSecondOnly) {
      inter.push_back({f, Domain::kFirst});
    } else if (rh == Role::kSecondOnly && rt == Role::kFirstOnly) {
      inter.push_back({f, Domain::kSecond});
    }
  }

  // Keep only predicates used inside both domains.
  const std::size_t m = source.predicates.size();
  std::vector<bool> used1(m, false), used2(m, false);
  for (const auto& f : pool1) used1[f.predicate] = true;
  for (const auto& f : pool2) used2[f.predicate] = true;

  DomainPair pair;
  pair.overlap_level = spec.level;
  pair.target_size = spec.target_size;
  pair.seed = spec.seed;

  constexpr auto kDropped = static_cast<PredicateId>(-1);
  std::vector<PredicateId> pred_map(m, kDropped);
  for (PredicateId r = 0; r < m; ++r) {
    if (used1[r] && used2[r]) pred_map[r] = pair.predicates.add(source.predicates.name(r));
  }

  // Local ids follow source id order.
  std::vector<EntityId> local1(n, 0), local2(n, 0);
  for (EntityId e = 0; e < n; ++e) {
    if (in_domain(role[e], Domain::kFirst)) local1[e] = pair.entities1.add(source.entities.name(e));
    if (in_domain(role[e], Domain::kSecond)) local2[e] = pair.entities2.add(source.entities.name(e));
  }
  for (EntityId e = 0; e < n; ++e) {
    if (role[e] == Role::kCommon) pair.common.push_back({local1[e], local2[e]});
  }

  auto localize = [&](const Triplet& f, Domain hd, Domain td) {
    const auto& lh = hd == Domain::kFirst ? local1 : local2;
    const auto& lt = td == Domain::kFirst ? local1 : local2;
    return Triplet{lh[f.head], pred_map[f.predicate], lt[f.tail]};
  };
  auto kept = [&](const Triplet& f) { return pred_map[f.predicate] != kDropped; };

  auto split_intra = [&](const std::vector<Triplet>& pool, Domain d, TripletStore& train) {
    std::vector<Triplet> facts;
    for (const auto& f : pool) {
      if (kept(f)) facts.push_back(localize(f, d, d));
    }
    const auto held_out = choose_subset(facts.size(), kIntraTestFraction, rng);
    for (std::size_t i = 0; i < facts.size(); ++i) {
      if (held_out[i]) {
        pair.intra_test.insert(intra(d, facts[i]));
      } else {
        train.insert(facts[i]);
      }
    }
  };
  split_intra(pool1, Domain::kFirst, pair.train1);
  split_intra(pool2, Domain::kSecond, pair.train2);

  std::vector<TaggedTriplet> cross;
  for (const auto& f : inter) {
    if (!kept(f.fact)) continue;
    const Domain td = other(f.head_domain);
    cross.push_back({localize(f.fact, f.head_domain, td), f.head_domain, td});
  }
  const auto valid = choose_subset(cross.size(), kInterValidFraction, rng);
  for (std::size_t i = 0; i < cross.size(); ++i) {
    (valid[i] ? pair.inter_valid : pair.inter_test).insert(cross[i]);
  }
  return pair;
}

}  // namespace idlp
