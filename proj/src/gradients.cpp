#include "idlp/gradients.hpp"

namespace idlp {

Eigen::VectorXd& SparseGradient::row(std::size_t slot) {
  auto [it, inserted] = rows_.try_emplace(slot);
  if (inserted) it->second = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
  return it->second;
}

Eigen::MatrixXd& SparseGradient::relation(PredicateId k) {
  auto [it, inserted] = relations_.try_emplace(k);
  if (inserted) {
    it->second = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  }
  return it->second;
}

bool SparseGradient::all_finite() const {
  for (const auto& [s, g] : rows_) {
    if (!g.allFinite()) return false;
  }
  for (const auto& [k, g] : relations_) {
    if (!g.allFinite()) return false;
  }
  return true;
}

void SparseGradient::apply(EmbeddingModel& model, double learning_rate) const {
  for (const auto& [s, g] : rows_) {
    model.slots().row(static_cast<Eigen::Index>(s)) -= learning_rate * g.transpose();
  }
  for (const auto& [k, g] : relations_) model.relation(k) -= learning_rate * g;
}

double accumulate_ranking_gradient(const EmbeddingModel& model, const TaggedTriplet& pos,
                                   const TaggedTriplet& neg, SparseGradient& grad) {
  if (pos.predicate() != neg.predicate()) throw DataError("ranking pair must share the predicate");
  const auto& R = model.relation(pos.predicate());

  const Eigen::VectorXd hp = model.embedding(pos.head()).transpose();
  const Eigen::VectorXd tp = model.embedding(pos.tail()).transpose();
  const Eigen::VectorXd hn = model.embedding(neg.head()).transpose();
  const Eigen::VectorXd tn = model.embedding(neg.tail()).transpose();

  const Eigen::VectorXd r_tp = R * tp;
  const Eigen::VectorXd r_tn = R * tn;
  const double loss = margin_loss(hp.dot(r_tp), hn.dot(r_tn));
  if (loss <= 0.0) return 0.0;

  // loss = 1 + f_neg - f_pos
  grad.row(model.slot(pos.head())) -= r_tp;
  grad.row(model.slot(pos.tail())) -= R.transpose() * hp;
  grad.row(model.slot(neg.head())) += r_tn;
  grad.row(model.slot(neg.tail())) += R.transpose() * hn;
  auto& gr = grad.relation(pos.predicate());
  gr.noalias() -= hp * tp.transpose();
  gr.noalias() += hn * tn.transpose();
  return loss;
}

void accumulate_frobenius_gradient(const EmbeddingModel& model, double mu,
                                   std::span<const std::size_t> slots,
                                   std::span<const PredicateId> relations, SparseGradient& grad) {
  if (mu == 0.0) return;
  for (auto s : slots) grad.row(s) += mu * model.slots().row(static_cast<Eigen::Index>(s)).transpose();
  for (auto k : relations) grad.relation(k) += mu * model.relation(k);
}

}  // namespace idlp
