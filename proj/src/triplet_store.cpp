#include "idlp/triplet_store.hpp"

#include <fstream>
#include <string>

namespace idlp {

Graph parse_triplets(std::istream& in, const std::string& source_name) {
  Graph g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos || t1 == 0 ||
        t2 == t1 + 1 || t2 + 1 == line.size()) {
      throw DataError(source_name + ":" + std::to_string(line_no) +
                      ": expected head<TAB>predicate<TAB>tail");
    }
    const EntityId h = g.entities.add(std::string_view(line).substr(0, t1));
    const PredicateId r = g.predicates.add(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
    const EntityId t = g.entities.add(std::string_view(line).substr(t2 + 1));
    g.facts.insert({h, r, t});
  }
  if (g.facts.empty()) throw DataError(source_name + ": no triplets found");
  return g;
}

Graph load_triplets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_triplets(in, path.string());
}

}  // namespace idlp
