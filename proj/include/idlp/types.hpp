#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

#include "idlp/errors.hpp"

namespace idlp {

using EntityId = std::uint32_t;
using PredicateId = std::uint32_t;

// The two graphs of a pair. Tags 1 and 2 are what appear in files.
enum class Domain : std::uint8_t { kFirst = 1, kSecond = 2 };

constexpr Domain other(Domain d) {
  return d == Domain::kFirst ? Domain::kSecond : Domain::kFirst;
}

constexpr int tag(Domain d) { return static_cast<int>(d); }

constexpr std::size_t index(Domain d) { return d == Domain::kFirst ? 0 : 1; }

inline Domain domain_from_tag(int t) {
  if (t == 1) return Domain::kFirst;
  if (t == 2) return Domain::kSecond;
  throw DataError("invalid domain tag " + std::to_string(t) + " (expected 1 or 2)");
}

// An entity addressed within its own domain's vocabulary.
struct Endpoint {
  Domain domain = Domain::kFirst;
  EntityId id = 0;

  auto operator<=>(const Endpoint&) const = default;
};

struct Triplet {
  EntityId head = 0;
  PredicateId predicate = 0;
  EntityId tail = 0;

  auto operator<=>(const Triplet&) const = default;
};

// A fact whose endpoints each carry a domain. Intra-domain facts have equal
// tags; inter-domain facts have one endpoint per domain.
struct TaggedTriplet {
  Triplet fact;
  Domain head_domain = Domain::kFirst;
  Domain tail_domain = Domain::kFirst;

  Endpoint head() const { return {head_domain, fact.head}; }
  Endpoint tail() const { return {tail_domain, fact.tail}; }
  PredicateId predicate() const { return fact.predicate; }
  bool is_inter() const { return head_domain != tail_domain; }

  auto operator<=>(const TaggedTriplet&) const = default;
};

inline TaggedTriplet intra(Domain d, const Triplet& t) { return {t, d, d}; }

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace idlp

template <>
struct std::hash<idlp::Triplet> {
  std::size_t operator()(const idlp::Triplet& t) const noexcept {
    std::size_t h = std::hash<std::uint32_t>{}(t.head);
    h = idlp::hash_combine(h, t.predicate);
    return idlp::hash_combine(h, t.tail);
  }
};

template <>
struct std::hash<idlp::TaggedTriplet> {
  std::size_t operator()(const idlp::TaggedTriplet& t) const noexcept {
    std::size_t h = std::hash<idlp::Triplet>{}(t.fact);
    return idlp::hash_combine(h, (idlp::tag(t.head_domain) << 2) | idlp::tag(t.tail_domain));
  }
};
