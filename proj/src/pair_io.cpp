#include "idlp/pair_io.hpp"

#include <fstream>
#include <map>
#include <string>

#include "idlp/text.hpp"

namespace fs = std::filesystem;

namespace idlp {
namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + p.string());
  return out;
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("missing or unreadable file: " + p.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

void write_names(const Vocab& v, const fs::path& p) {
  auto out = open_out(p);
  for (const auto& n : v.names()) out << n << '\n';
}

Vocab read_names(const fs::path& p) {
  try {
    return Vocab(read_lines(p));
  } catch (const DataError& e) {
    throw DataError(p.string() + ": " + e.what());
  }
}

void write_triplets(const TripletStore& s, const fs::path& p) {
  auto out = open_out(p);
  for (const auto& t : s) out << t.head << '\t' << t.predicate << '\t' << t.tail << '\n';
}

// Tagged files carry one extra column: the domain of intra facts, or the
// head's domain for cross-domain facts.
void write_tagged(const TaggedStore& s, const fs::path& p) {
  auto out = open_out(p);
  for (const auto& t : s) {
    out << t.fact.head << '\t' << t.fact.predicate << '\t' << t.fact.tail << '\t'
        << tag(t.head_domain) << '\n';
  }
}

std::vector<std::vector<std::uint64_t>> read_table(const fs::path& p, std::size_t columns) {
  std::vector<std::vector<std::uint64_t>> rows;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(p)) {
    ++line_no;
    const auto fields = split_tabs(line);
    const std::string ctx = p.string() + ":" + std::to_string(line_no);
    if (fields.size() != columns) {
      throw DataError(ctx + ": expected " + std::to_string(columns) + " columns");
    }
    std::vector<std::uint64_t> row;
    for (auto f : fields) row.push_back(parse_number<std::uint64_t>(f, ctx));
    rows.push_back(std::move(row));
  }
  return rows;
}

TripletStore read_triplets(const fs::path& p) {
  TripletStore s;
  for (const auto& r : read_table(p, 3)) {
    s.insert({static_cast<EntityId>(r[0]), static_cast<PredicateId>(r[1]),
              static_cast<EntityId>(r[2])});
  }
  return s;
}

TaggedStore read_tagged(const fs::path& p, bool inter) {
  TaggedStore s;
  for (const auto& r : read_table(p, 4)) {
    const Domain hd = domain_from_tag(static_cast<int>(r[3]));
    s.insert({{static_cast<EntityId>(r[0]), static_cast<PredicateId>(r[1]),
               static_cast<EntityId>(r[2])},
              hd,
              inter ? other(hd) : hd});
  }
  return s;
}

}  // namespace

void save_domain_pair(const DomainPair& pair, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());

  write_names(pair.entities1, dir / "entities1.txt");
  write_names(pair.entities2, dir / "entities2.txt");
  write_names(pair.predicates, dir / "predicates.txt");
  {
    auto out = open_out(dir / "common.tsv");
    for (const auto& c : pair.common) out << c.first << '\t' << c.second << '\n';
  }
  write_triplets(pair.train1, dir / "train1.tsv");
  write_triplets(pair.train2, dir / "train2.tsv");
  write_tagged(pair.intra_test, dir / "intra_test.tsv");
  write_tagged(pair.inter_valid, dir / "inter_valid.tsv");
  write_tagged(pair.inter_test, dir / "inter_test.tsv");

  auto out = open_out(dir / "meta.txt");
  out << "schema_version=" << kPairSchemaVersion << '\n'
      << "level=" << format_double(pair.overlap_level) << '\n'
      << "target_size=" << pair.target_size << '\n'
      << "seed=" << pair.seed << '\n'
      << "entities1=" << pair.entities1.size() << '\n'
      << "entities2=" << pair.entities2.size() << '\n'
      << "predicates=" << pair.predicates.size() << '\n'
      << "common=" << pair.common.size() << '\n'
      << "train1=" << pair.train1.size() << '\n'
      << "train2=" << pair.train2.size() << '\n'
      << "intra_test=" << pair.intra_test.size() << '\n'
      << "inter_valid=" << pair.inter_valid.size() << '\n'
      << "inter_test=" << pair.inter_test.size() << '\n';
}

DomainPair load_domain_pair(const fs::path& dir) {
  const fs::path meta_path = dir / "meta.txt";
  std::map<std::string, std::string, std::less<>> meta;
  for (const auto& line : read_lines(meta_path)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError(meta_path.string() + ": malformed line '" + line + "'");
    meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto meta_value = [&](const std::string& key) -> const std::string& {
    auto it = meta.find(key);
    if (it == meta.end()) throw DataError(meta_path.string() + ": missing key '" + key + "'");
    return it->second;
  };
  const auto version = parse_number<int>(meta_value("schema_version"), meta_path.string());
  if (version != kPairSchemaVersion) {
    throw DataError(meta_path.string() + ": schema version " + std::to_string(version) +
                    " is not supported (expected " + std::to_string(kPairSchemaVersion) + ")");
  }

  DomainPair pair;
  pair.overlap_level = parse_number<double>(meta_value("level"), meta_path.string());
  pair.target_size = parse_number<std::size_t>(meta_value("target_size"), meta_path.string());
  pair.seed = parse_number<std::uint64_t>(meta_value("seed"), meta_path.string());

  pair.entities1 = read_names(dir / "entities1.txt");
  pair.entities2 = read_names(dir / "entities2.txt");
  pair.predicates = read_names(dir / "predicates.txt");
  for (const auto& r : read_table(dir / "common.tsv", 2)) {
    pair.common.push_back({static_cast<EntityId>(r[0]), static_cast<EntityId>(r[1])});
  }
  pair.train1 = read_triplets(dir / "train1.tsv");
  pair.train2 = read_triplets(dir / "train2.tsv");
  pair.intra_test = read_tagged(dir / "intra_test.tsv", false);
  pair.inter_valid = read_tagged(dir / "inter_valid.tsv", true);
  pair.inter_test = read_tagged(dir / "inter_test.tsv", true);

  auto expect_size = [&](const std::string& key, std::size_t actual) {
    const auto expected = parse_number<std::size_t>(meta_value(key), meta_path.string());
    if (expected != actual) {
      throw DataError(meta_path.string() + ": " + key + "=" + std::to_string(expected) +
                      " but found " + std::to_string(actual));
    }
  };
  expect_size("entities1", pair.entities1.size());
  expect_size("entities2", pair.entities2.size());
  expect_size("predicates", pair.predicates.size());
  expect_size("common", pair.common.size());
  expect_size("train1", pair.train1.size());
  expect_size("train2", pair.train2.size());
  expect_size("intra_test", pair.intra_test.size());
  expect_size("inter_valid", pair.inter_valid.size());
  expect_size("inter_test", pair.inter_test.size());

  validate(pair);
  return pair;
}

}  // namespace idlp
