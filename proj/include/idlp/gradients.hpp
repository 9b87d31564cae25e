#pragma once

#include <map>
#include <span>

#include <Eigen/Dense>

#include "idlp/model.hpp"

namespace idlp {

// Gradient restricted to the parameters a step touched: slot rows and
// predicate matrices. Contributions to the same slot accumulate, which is
// how tied common entities receive updates from both domains.
class SparseGradient {
 public:
  explicit SparseGradient(std::size_t dim) : dim_(dim) {}

  Eigen::VectorXd& row(std::size_t slot);
  Eigen::MatrixXd& relation(PredicateId k);

  const std::map<std::size_t, Eigen::VectorXd>& rows() const { return rows_; }
  const std::map<PredicateId, Eigen::MatrixXd>& relations() const { return relations_; }
  bool empty() const { return rows_.empty() && relations_.empty(); }
  bool all_finite() const;

  // Plain SGD step: x <- x - lr * g.
  void apply(EmbeddingModel& model, double learning_rate) const;

 private:
  std::size_t dim_;
  std::map<std::size_t, Eigen::VectorXd> rows_;
  std::map<PredicateId, Eigen::MatrixXd> relations_;
};

// Adds the subgradient of margin_loss(score(pos), score(neg)) and returns the
// loss. When the hinge is inactive (including exactly at the kink) nothing is
// added. Both facts must share the predicate.
//   d f / d a_h = R a_t,  d f / d a_t = R^T a_h,  d f / d R = a_h a_t^T
double accumulate_ranking_gradient(const EmbeddingModel& model, const TaggedTriplet& pos,
                                   const TaggedTriplet& neg, SparseGradient& grad);

// Gradient of (mu / 2) * (sum ||a||^2 + sum ||R_k||_F^2) over the given slots
// and predicates only.
void accumulate_frobenius_gradient(const EmbeddingModel& model, double mu,
                                   std::span<const std::size_t> slots,
                                   std::span<const PredicateId> relations, SparseGradient& grad);

}  // namespace idlp
