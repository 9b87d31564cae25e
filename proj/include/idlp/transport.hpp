#pragma once

#include <filesystem>
#include <span>

#include <Eigen/Dense>

#include "idlp/model.hpp"
#include "idlp/vocab.hpp"

namespace idlp {

struct SinkhornOptions {
  double lambda = 100.0;  // inverse temperature; K = exp(-lambda * C)
  int max_iterations = 1000;
  double tolerance = 1e-6;  // on the max-norm marginal violation
  // Divide the cost by its largest entry before iterating. The plan then
  // solves the problem for C / max(C) while costs are still reported in the
  // original units.
  bool normalize_cost = false;
};

// Entropic transport problem and its solution P = diag(u) K diag(v). The
// scalings are kept in log form since u and v under- or overflow for large
// lambda.
struct TransportState {
  Eigen::VectorXd pi1;
  Eigen::VectorXd pi2;
  Eigen::MatrixXd cost;  // original units
  Eigen::MatrixXd plan;
  Eigen::VectorXd log_u;
  Eigen::VectorXd log_v;
  double lambda = 0.0;
  double cost_scale = 1.0;  // divisor applied to `cost` during iteration
  int iterations = 0;
  double marginal_violation = 0.0;
  bool converged = false;
};

Eigen::VectorXd uniform_marginal(std::size_t n);

// C_ij = ||a1_i - a2_j||^2, evaluated as a sum of squared differences so that
// identical rows give exactly zero. Throws DataError on a width mismatch.
Eigen::MatrixXd cost_matrix(const RowMatrix& a1, const RowMatrix& a2);

// Sinkhorn iteration with log-domain stabilization. Updates alternate
//   log u = log pi1 - LSE_j(log K_ij + log v_j)
//   log v = log pi2 - LSE_i(log K_ij + log u_i)
// carried out as cheap scaling steps on an absorbed kernel between exact
// log-domain steps. Starts from `warm_start`'s scalings when their sizes
// match. Otherwise starts from zero and anneals: a smoother problem is solved
// first (to a loose tolerance) and lambda doubled up to its target. Stops once the row-marginal violation (columns are exact
// after each v update) drops below the tolerance or the iteration cap is
// reached; every update of both scalings counts as one iteration.
//
// Throws ConfigError for lambda <= 0, DataError for non-finite costs, shape
// mismatches, invalid marginals or marginals of different total mass.
TransportState sinkhorn(Eigen::VectorXd pi1, Eigen::VectorXd pi2, Eigen::MatrixXd cost,
                        const SinkhornOptions& options, const TransportState* warm_start = nullptr);

// <P, C>
double transport_cost(const Eigen::MatrixXd& plan, const Eigen::MatrixXd& cost);
inline double transport_cost(const TransportState& s) { return transport_cost(s.plan, s.cost); }

// <P, C> + (cost_scale / lambda) * sum P log P, with 0 log 0 = 0.
double entropic_objective(const TransportState& s);

// Max-norm violation of both marginals.
double marginal_violation(const Eigen::MatrixXd& plan, const Eigen::VectorXd& pi1,
                          const Eigen::VectorXd& pi2);

// Gradient of <P, C(A1, A2)> with P held fixed, for the requested rows:
//   d/da1_i = 2 sum_j P_ij (a1_i - a2_j)
//   d/da2_j = 2 sum_i P_ij (a2_j - a1_i)
// Row r of `first` belongs to rows1[r]; likewise for `second`.
struct OtGradient {
  RowMatrix first;
  RowMatrix second;
};
OtGradient ot_embedding_gradient(const Eigen::MatrixXd& plan, const RowMatrix& a1, const RowMatrix& a2,
                                 std::span<const EntityId> rows1, std::span<const EntityId> rows2);

// Diagnostic dump: header row of domain-2 names, then one row per domain-1
// entity.
void write_plan_tsv(const TransportState& s, const EntityVocab& names1, const EntityVocab& names2,
                    const std::filesystem::path& path);

}  // namespace idlp
