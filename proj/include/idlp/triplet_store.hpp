#pragma once

#include <filesystem>
#include <istream>
#include <unordered_set>
#include <vector>

#include "idlp/types.hpp"
#include "idlp/vocab.hpp"

namespace idlp {

// Insertion-ordered set of facts with constant-time membership.
template <class Fact>
class FactStore {
 public:
  FactStore() = default;

  // False if the fact was already present.
  bool insert(const Fact& f) {
    if (!index_.insert(f).second) return false;
    facts_.push_back(f);
    return true;
  }

  bool contains(const Fact& f) const { return index_.contains(f); }
  std::size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }
  const std::vector<Fact>& facts() const { return facts_; }
  const Fact& operator[](std::size_t i) const { return facts_[i]; }
  auto begin() const { return facts_.begin(); }
  auto end() const { return facts_.end(); }

  bool operator==(const FactStore& other) const { return facts_ == other.facts_; }

 private:
  std::vector<Fact> facts_;
  std::unordered_set<Fact> index_;
};

using TripletStore = FactStore<Triplet>;
using TaggedStore = FactStore<TaggedTriplet>;

// A single multi-relational graph as read from disk.
struct Graph {
  EntityVocab entities;
  PredicateVocab predicates;
  TripletStore facts;
};

// Reads `head<TAB>predicate<TAB>tail` lines. Vocabularies are built in
// first-appearance order and duplicate lines collapse. Blank lines are
// skipped. Throws DataError naming the line on malformed input, and on
// input without any fact.
Graph parse_triplets(std::istream& in, const std::string& source_name = "<stream>");
Graph load_triplets(const std::filesystem::path& path);

}  // namespace idlp
