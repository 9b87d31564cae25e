#include "idlp/domain_pair.hpp"

#include <set>
#include <string>
#include <tuple>

namespace idlp {
namespace {

// Facts are compared by entity name so that a fact held under different
// domain tags (possible only through common entities) is still caught.
using NamedFact = std::tuple<std::string, std::uint32_t, std::string>;

void check_endpoint(const DomainPair& p, Endpoint e, const char* where) {
  if (e.id >= p.entity_count(e.domain)) {
    throw DataError(std::string(where) + ": entity id " + std::to_string(e.id) +
                    " out of range for domain " + std::to_string(tag(e.domain)));
  }
}

}  // namespace

void validate(const DomainPair& p) {
  std::set<EntityId> seen1, seen2;
  for (const auto& c : p.common) {
    check_endpoint(p, {Domain::kFirst, c.first}, "common");
    check_endpoint(p, {Domain::kSecond, c.second}, "common");
    if (!seen1.insert(c.first).second || !seen2.insert(c.second).second) {
      throw DataError("common: entity paired more than once");
    }
  }

  std::set<NamedFact> all;
  auto add = [&](const TaggedTriplet& t, const char* where) {
    check_endpoint(p, t.head(), where);
    check_endpoint(p, t.tail(), where);
    if (t.predicate() >= p.predicates.size()) {
      throw DataError(std::string(where) + ": predicate id out of range");
    }
    NamedFact key{p.entities(t.head_domain).name(t.fact.head), t.predicate(),
                  p.entities(t.tail_domain).name(t.fact.tail)};
    if (!all.insert(key).second) {
      throw DataError(std::string(where) + ": fact appears in more than one split");
    }
  };

  for (const auto& t : p.train1) add(intra(Domain::kFirst, t), "train1");
  for (const auto& t : p.train2) add(intra(Domain::kSecond, t), "train2");
  for (const auto& t : p.intra_test) {
    if (t.is_inter()) throw DataError("intra_test: cross-domain fact");
    add(t, "intra_test");
  }
  for (const auto* store : {&p.inter_valid, &p.inter_test}) {
    for (const auto& t : *store) {
      if (!t.is_inter()) throw DataError("inter split: intra-domain fact");
      add(t, "inter split");
    }
  }
}

}  // namespace idlp
