#include "idlp/checkpoint.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "idlp/text.hpp"

namespace idlp {

void write_checkpoint(const EmbeddingModel& model, std::ostream& out) {
  const auto d = static_cast<Eigen::Index>(model.dim());
  out << model.dim() << ' ' << model.relation_count() << ' ' << model.slot_count() << '\n';
  auto write_row = [&](auto&& row) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (j) out << ' ';
      out << format_double17(row(j));
    }
    out << '\n';
  };
  for (Eigen::Index i = 0; i < model.slots().rows(); ++i) write_row(model.slots().row(i));
  for (const auto& r : model.relations()) {
    for (Eigen::Index i = 0; i < d; ++i) write_row(r.row(i));
  }
  for (Domain dom : {Domain::kFirst, Domain::kSecond}) {
    const auto& m = model.map(dom);
    for (std::size_t id = 0; id < m.size(); ++id) out << tag(dom) << ' ' << id << ' ' << m[id] << '\n';
  }
}

EmbeddingModel read_checkpoint(std::istream& in, const std::string& source_name) {
  auto fail = [&](const std::string& what) { return DataError(source_name + ": " + what); };
  std::size_t d = 0, m = 0, n_slots = 0;
  if (!(in >> d >> m >> n_slots) || d == 0) throw fail("bad header");

  auto read_value = [&]() {
    std::string tok;
    if (!(in >> tok)) throw fail("truncated parameter block");
    return parse_number<double>(tok, source_name);
  };
  RowMatrix slots(static_cast<Eigen::Index>(n_slots), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < slots.rows(); ++i) {
    for (Eigen::Index j = 0; j < slots.cols(); ++j) slots(i, j) = read_value();
  }
  std::vector<Eigen::MatrixXd> relations(m);
  for (auto& r : relations) {
    r.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
      for (Eigen::Index j = 0; j < r.cols(); ++j) r(i, j) = read_value();
    }
  }

  std::vector<std::size_t> maps[2];
  int dom = 0;
  std::size_t id = 0, slot = 0;
  while (in >> dom >> id >> slot) {
    auto& target = maps[index(domain_from_tag(dom))];
    if (id != target.size()) throw fail("entity map lines out of order");
    target.push_back(slot);
  }
  if (!in.eof()) throw fail("malformed entity map");
  return EmbeddingModel(d, std::move(slots), std::move(relations), std::move(maps[0]), std::move(maps[1]));
}

void save_checkpoint(const EmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  write_checkpoint(model, out);
  if (!out) throw DataError("write failed: " + path.string());
}

EmbeddingModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  return read_checkpoint(in, path.string());
}

}  // namespace idlp
