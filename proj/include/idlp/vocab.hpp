#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "idlp/types.hpp"

namespace idlp {

// Dense 0-based name <-> id mapping; ids follow insertion order.
class Vocab {
 public:
  Vocab() = default;
  explicit Vocab(std::vector<std::string> names);

  // Returns the existing id when the name is already present.
  std::uint32_t add(std::string_view name);
  std::optional<std::uint32_t> find(std::string_view name) const;
  std::uint32_t at(std::string_view name) const;

  const std::string& name(std::uint32_t id) const { return names_.at(id); }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }

  bool operator==(const Vocab& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

using EntityVocab = Vocab;
using PredicateVocab = Vocab;

}  // namespace idlp
