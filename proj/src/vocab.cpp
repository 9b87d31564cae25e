#include "idlp/vocab.hpp"

#include <string>

namespace idlp {

Vocab::Vocab(std::vector<std::string> names) {
  for (auto& n : names) {
    if (find(n)) throw DataError("duplicate vocabulary entry '" + n + "'");
    add(n);
  }
}

std::uint32_t Vocab::add(std::string_view name) {
  std::string key(name);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(names_.size());
  index_.emplace(key, id);
  names_.push_back(std::move(key));
  return id;
}

std::optional<std::uint32_t> Vocab::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t Vocab::at(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw DataError("unknown name '" + std::string(name) + "'");
}

}  // namespace idlp
