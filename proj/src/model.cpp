#include "idlp/model.hpp"

#include <random>
#include <string>

namespace idlp {

EmbeddingModel::EmbeddingModel(const DomainPair& pair, std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ConfigError("embedding dimension must be at least 1");
  const std::size_t n1 = pair.entities1.size();
  const std::size_t n2 = pair.entities2.size();
  map1_.resize(n1);
  for (std::size_t i = 0; i < n1; ++i) map1_[i] = i;

  constexpr auto kUnset = static_cast<std::size_t>(-1);
  map2_.assign(n2, kUnset);
  for (const auto& c : pair.common) {
    if (c.first >= n1 || c.second >= n2) throw DataError("common pair out of range");
    map2_[c.second] = map1_[c.first];
  }
  std::size_t next = n1;
  for (auto& s : map2_) {
    if (s == kUnset) s = next++;
  }
  slots_ = RowMatrix::Zero(static_cast<Eigen::Index>(next), static_cast<Eigen::Index>(dim));
  relations_.assign(pair.predicates.size(),
                    Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
}

EmbeddingModel::EmbeddingModel(std::size_t dim, RowMatrix slots, std::vector<Eigen::MatrixXd> relations,
                               std::vector<std::size_t> map1, std::vector<std::size_t> map2)
    : dim_(dim), slots_(std::move(slots)), relations_(std::move(relations)), map1_(std::move(map1)),
      map2_(std::move(map2)) {
  if (static_cast<std::size_t>(slots_.cols()) != dim_) throw DataError("slot width differs from dimension");
  for (const auto& r : relations_) {
    if (static_cast<std::size_t>(r.rows()) != dim_ || static_cast<std::size_t>(r.cols()) != dim_) {
      throw DataError("relation matrix is not d x d");
    }
  }
  for (const auto* m : {&map1_, &map2_}) {
    for (auto s : *m) {
      if (s >= slot_count()) throw DataError("entity mapped to slot " + std::to_string(s) + " out of range");
    }
  }
}

EmbeddingModel EmbeddingModel::initialize(const DomainPair& pair, std::size_t dim, std::uint64_t seed) {
  EmbeddingModel m(pair, dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(dim)));
  for (Eigen::Index i = 0; i < m.slots_.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.slots_.cols(); ++j) m.slots_(i, j) = normal(rng);
  }
  for (auto& r : m.relations_) {
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      for (Eigen::Index i = 0; i < r.rows(); ++i) r(i, j) = normal(rng);
    }
  }
  return m;
}

std::size_t EmbeddingModel::slot(Endpoint e) const {
  const auto& m = map(e.domain);
  if (e.id >= m.size()) {
    throw DataError("entity id " + std::to_string(e.id) + " out of range for domain " +
                    std::to_string(tag(e.domain)));
  }
  return m[e.id];
}

RowMatrix EmbeddingModel::domain_matrix(Domain d) const {
  const auto& m = map(d);
  RowMatrix out(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < m.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = slots_.row(static_cast<Eigen::Index>(m[i]));
  }
  return out;
}

bool EmbeddingModel::all_finite() const {
  if (!slots_.allFinite()) return false;
  for (const auto& r : relations_) {
    if (!r.allFinite()) return false;
  }
  return true;
}

bool EmbeddingModel::operator==(const EmbeddingModel& o) const {
  if (dim_ != o.dim_ || map1_ != o.map1_ || map2_ != o.map2_) return false;
  if (slots_.rows() != o.slots_.rows() || slots_ != o.slots_) return false;
  if (relations_.size() != o.relations_.size()) return false;
  for (std::size_t k = 0; k < relations_.size(); ++k) {
    if (relations_[k] != o.relations_[k]) return false;
  }
  return true;
}

double score(const EmbeddingModel& model, Endpoint head, PredicateId predicate, Endpoint tail) {
  if (predicate >= model.relation_count()) {
    throw DataError("predicate id " + std::to_string(predicate) + " out of range");
  }
  const auto h = model.embedding(head);
  const auto t = model.embedding(tail);
  return h.dot((model.relation(predicate) * t.transpose()).transpose());
}

}  // namespace idlp
