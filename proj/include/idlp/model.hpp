#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "idlp/domain_pair.hpp"
#include "idlp/types.hpp"

namespace idlp {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Bilinear embedding model over two domains.
//
// Entity embeddings live in parameter slots. Domain 1 entity i uses slot i;
// domain 2 entities share the slot of their common partner and otherwise get
// fresh slots after the first domain's. Every predicate owns a dense d x d
// matrix shared by both domains.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;

  // All-zero model with the tying structure of `pair`.
  EmbeddingModel(const DomainPair& pair, std::size_t dim);

  // Explicit layout; used when reading checkpoints. Throws DataError when a
  // map entry points outside the slot table.
  EmbeddingModel(std::size_t dim, RowMatrix slots, std::vector<Eigen::MatrixXd> relations,
                 std::vector<std::size_t> map1, std::vector<std::size_t> map2);

  // Entries drawn i.i.d. from N(0, 1/d), slots first and then relations.
  static EmbeddingModel initialize(const DomainPair& pair, std::size_t dim, std::uint64_t seed);

  std::size_t dim() const { return dim_; }
  std::size_t slot_count() const { return static_cast<std::size_t>(slots_.rows()); }
  std::size_t relation_count() const { return relations_.size(); }
  std::size_t entity_count(Domain d) const { return map(d).size(); }

  const std::vector<std::size_t>& map(Domain d) const { return d == Domain::kFirst ? map1_ : map2_; }
  std::size_t slot(Endpoint e) const;

  auto embedding(Endpoint e) const { return slots_.row(static_cast<Eigen::Index>(slot(e))); }
  const RowMatrix& slots() const { return slots_; }
  RowMatrix& slots() { return slots_; }
  const Eigen::MatrixXd& relation(PredicateId k) const { return relations_.at(k); }
  Eigen::MatrixXd& relation(PredicateId k) { return relations_.at(k); }
  const std::vector<Eigen::MatrixXd>& relations() const { return relations_; }

  // Embeddings of every entity of a domain, one row per entity id.
  RowMatrix domain_matrix(Domain d) const;

  bool all_finite() const;
  bool operator==(const EmbeddingModel& other) const;

 private:
  std::size_t dim_ = 0;
  RowMatrix slots_;
  std::vector<Eigen::MatrixXd> relations_;
  std::vector<std::size_t> map1_;
  std::vector<std::size_t> map2_;
};

// a_head^T R_k a_tail. Throws DataError on out-of-range ids.
double score(const EmbeddingModel& model, Endpoint head, PredicateId predicate, Endpoint tail);
inline double score(const EmbeddingModel& model, const TaggedTriplet& t) {
  return score(model, t.head(), t.predicate(), t.tail());
}

// Pairwise ranking hinge: max(1 + f_neg - f_pos, 0).
inline double margin_loss(double f_pos, double f_neg) {
  const double v = 1.0 + f_neg - f_pos;
  return v > 0.0 ? v : 0.0;
}

}  // namespace idlp
