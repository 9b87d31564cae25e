#include "idlp/transport.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

#include "idlp/text.hpp"

namespace idlp {
namespace {

void check_marginal(const Eigen::VectorXd& pi, const char* name) {
  if (pi.size() == 0) throw DataError(std::string(name) + " is empty");
  if (!pi.allFinite() || (pi.array() < 0.0).any()) {
    throw DataError(std::string(name) + " must be finite and nonnegative");
  }
}

// Scaling factors are folded into the log potentials once they leave
// [1 / kAbsorbBound, kAbsorbBound].
constexpr double kAbsorbBound = 1e50;

// Largest lambda * (cost range) at which a cold start begins.
constexpr double kAnnealStart = 32.0;
constexpr double kAnnealTolerance = 1e-3;

// log sum_k exp(x_k) for a strided sequence, shifted by its maximum.
template <class Vec>
double log_sum_exp(const Vec& x) {
  const double m = x.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((x.array() - m).exp().sum());
}

}  // namespace

Eigen::VectorXd uniform_marginal(std::size_t n) {
  return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
}

Eigen::MatrixXd cost_matrix(const RowMatrix& a1, const RowMatrix& a2) {
  if (a1.cols() != a2.cols()) throw DataError("cost_matrix: embedding widths differ");
  Eigen::MatrixXd c(a1.rows(), a2.rows());
  for (Eigen::Index j = 0; j < a2.rows(); ++j) {
    for (Eigen::Index i = 0; i < a1.rows(); ++i) c(i, j) = (a1.row(i) - a2.row(j)).squaredNorm();
  }
  return c;
}

TransportState sinkhorn(Eigen::VectorXd pi1, Eigen::VectorXd pi2, Eigen::MatrixXd cost,
                        const SinkhornOptions& options, const TransportState* warm_start) {
  if (!(options.lambda > 0.0) || !std::isfinite(options.lambda)) {
    throw ConfigError("sinkhorn: lambda must be positive and finite");
  }
  if (options.max_iterations < 1) throw ConfigError("sinkhorn: max_iterations must be positive");
  check_marginal(pi1, "pi1");
  check_marginal(pi2, "pi2");
  if (cost.rows() != pi1.size() || cost.cols() != pi2.size()) {
    throw DataError("sinkhorn: cost shape does not match the marginals");
  }
  if (!cost.allFinite()) throw DataError("sinkhorn: cost matrix has non-finite entries");
  const double mass1 = pi1.sum(), mass2 = pi2.sum();
  if (std::abs(mass1 - mass2) > 1e-9 * std::max(1.0, std::abs(mass1))) {
    throw DataError("sinkhorn: marginals carry different total mass");
  }

  TransportState s;
  s.lambda = options.lambda;
  s.cost_scale = 1.0;
  if (options.normalize_cost) {
    const double max_cost = cost.maxCoeff();
    if (max_cost > 0.0) s.cost_scale = max_cost;
  }
  const Eigen::ArrayXd log_pi1 = pi1.array().log();
  const Eigen::ArrayXd log_pi2 = pi2.array().log();
  const Eigen::Index n1 = cost.rows(), n2 = cost.cols();

  s.log_u = Eigen::VectorXd::Zero(n1);
  s.log_v = Eigen::VectorXd::Zero(n2);
  const bool warm = warm_start && warm_start->log_u.size() == n1 && warm_start->log_v.size() == n2 &&
                    warm_start->log_u.allFinite() && warm_start->log_v.allFinite();
  if (warm) {
    s.log_u = warm_start->log_u;
    s.log_v = warm_start->log_v;
  }

  // Cold starts anneal lambda: solve a smoother problem first, then double
  // lambda (rescaling the potentials) until the target is reached.
  std::vector<double> stages{options.lambda};
  if (!warm) {
    const double range = (cost.maxCoeff() - cost.minCoeff()) / s.cost_scale;
    while (stages.back() * range > kAnnealStart) stages.push_back(stages.back() / 2.0);
  }

  Eigen::MatrixXd log_k;
  RowMatrix log_k_rows;  // contiguous rows for the u update
  Eigen::VectorXd row_lse(n1);
  auto log_iteration = [&] {
    for (Eigen::Index i = 0; i < n1; ++i) row_lse(i) = log_sum_exp(log_k_rows.row(i).transpose() + s.log_v);
    s.log_u = log_pi1.matrix() - row_lse;
    for (Eigen::Index j = 0; j < n2; ++j) s.log_v(j) = log_pi2(j) - log_sum_exp(log_k.col(j) + s.log_u);
    ++s.iterations;
  };

  // Zero-mass entries have log pi = -inf; their potentials stay at -inf and
  // the corresponding plan rows/columns at zero.
  auto scale = [](const Eigen::VectorXd& pi, const Eigen::VectorXd& sums, Eigen::VectorXd& out) {
    bool ok = true;
    for (Eigen::Index i = 0; i < pi.size(); ++i) {
      if (pi(i) == 0.0) {
        out(i) = 0.0;
        continue;
      }
      out(i) = pi(i) / sums(i);
      ok = ok && std::isfinite(out(i)) && out(i) < kAbsorbBound && out(i) > 1.0 / kAbsorbBound;
    }
    return ok;
  };
  auto absorb = [](Eigen::VectorXd& log_x, const Eigen::VectorXd& pi, const Eigen::VectorXd& x) {
    for (Eigen::Index i = 0; i < pi.size(); ++i) {
      if (pi(i) > 0.0) log_x(i) += std::log(x(i));
    }
  };

  // Each sweep makes one exact log-domain update, then runs plain scaling
  // updates a <- pi1 / (Kt b), b <- pi2 / (Kt^T a) on the stabilized kernel
  //   Kt_ij = exp(log K_ij + log u_i + log v_j)
  // until a scaling factor leaves the safe range; the factors are then
  // folded into the potentials and a new sweep starts. Columns are exact
  // after every b update, so only row sums are checked.
  RowMatrix kt(n1, n2);
  Eigen::VectorXd a(n1), b(n2), kb(n1), kta(n2), a_next(n1), b_next(n2);
  s.iterations = 0;
  s.marginal_violation = std::numeric_limits<double>::infinity();
  for (auto stage = stages.rbegin(); stage != stages.rend(); ++stage) {
    if (stage != stages.rbegin()) {
      const double ratio = *stage / *std::prev(stage);
      for (Eigen::Index i = 0; i < n1; ++i) {
        if (std::isfinite(s.log_u(i))) s.log_u(i) *= ratio;
      }
      for (Eigen::Index j = 0; j < n2; ++j) {
        if (std::isfinite(s.log_v(j))) s.log_v(j) *= ratio;
      }
    }
    const bool last = std::next(stage) == stages.rend();
    const double tolerance = last ? options.tolerance : std::max(options.tolerance, kAnnealTolerance);
    log_k = (-*stage / s.cost_scale) * cost;
    log_k_rows = log_k;
    while (s.iterations < options.max_iterations) {
      log_iteration();
      for (Eigen::Index i = 0; i < n1; ++i) {
        for (Eigen::Index j = 0; j < n2; ++j) {
          const double e = s.log_u(i) + log_k_rows(i, j) + s.log_v(j);
          kt(i, j) = std::isfinite(e) ? std::exp(e) : 0.0;
        }
      }
      a.setOnes();
      b.setOnes();
      kb.noalias() = kt * b;
      bool overflow = false;
      while (true) {
        s.marginal_violation = (a.cwiseProduct(kb) - pi1).cwiseAbs().maxCoeff();
        if (s.marginal_violation < tolerance || s.iterations >= options.max_iterations) break;
        const bool a_ok = scale(pi1, kb, a_next);
        kta.noalias() = kt.transpose() * a_next;
        if (!a_ok || !scale(pi2, kta, b_next)) {
          overflow = true;
          break;
        }
        a.swap(a_next);
        b.swap(b_next);
        ++s.iterations;
        kb.noalias() = kt * b;
      }
      absorb(s.log_u, pi1, a);
      absorb(s.log_v, pi2, b);
      if (!overflow) break;
    }
  }

  s.plan.resize(n1, n2);
  for (Eigen::Index j = 0; j < n2; ++j) {
    for (Eigen::Index i = 0; i < n1; ++i) {
      const double e = s.log_u(i) + log_k(i, j) + s.log_v(j);
      s.plan(i, j) = std::isfinite(e) ? std::exp(e) : 0.0;
    }
  }
  s.marginal_violation = marginal_violation(s.plan, pi1, pi2);
  s.converged = s.marginal_violation < options.tolerance;
  s.pi1 = std::move(pi1);
  s.pi2 = std::move(pi2);
  s.cost = std::move(cost);
  return s;
}

double transport_cost(const Eigen::MatrixXd& plan, const Eigen::MatrixXd& cost) {
  if (plan.rows() != cost.rows() || plan.cols() != cost.cols()) {
    throw DataError("transport_cost: plan and cost shapes differ");
  }
  return plan.cwiseProduct(cost).sum();
}

double entropic_objective(const TransportState& s) {
  double neg_entropy = 0.0;
  for (Eigen::Index j = 0; j < s.plan.cols(); ++j) {
    for (Eigen::Index i = 0; i < s.plan.rows(); ++i) {
      const double p = s.plan(i, j);
      if (p > 0.0) neg_entropy += p * std::log(p);
    }
  }
  return transport_cost(s) + (s.cost_scale / s.lambda) * neg_entropy;
}

double marginal_violation(const Eigen::MatrixXd& plan, const Eigen::VectorXd& pi1,
                          const Eigen::VectorXd& pi2) {
  const double rows = (plan.rowwise().sum() - pi1).cwiseAbs().maxCoeff();
  const double cols = (plan.colwise().sum().transpose() - pi2).cwiseAbs().maxCoeff();
  return std::max(rows, cols);
}

OtGradient ot_embedding_gradient(const Eigen::MatrixXd& plan, const RowMatrix& a1, const RowMatrix& a2,
                                 std::span<const EntityId> rows1, std::span<const EntityId> rows2) {
  if (plan.rows() != a1.rows() || plan.cols() != a2.rows() || a1.cols() != a2.cols()) {
    throw DataError("ot_embedding_gradient: plan and embedding shapes disagree");
  }
  OtGradient g;
  g.first.resize(static_cast<Eigen::Index>(rows1.size()), a1.cols());
  g.second.resize(static_cast<Eigen::Index>(rows2.size()), a1.cols());
  for (std::size_t r = 0; r < rows1.size(); ++r) {
    const auto i = static_cast<Eigen::Index>(rows1[r]);
    if (i >= a1.rows()) throw DataError("ot_embedding_gradient: domain 1 row out of range");
    const double mass = plan.row(i).sum();
    g.first.row(static_cast<Eigen::Index>(r)) = 2.0 * (mass * a1.row(i) - plan.row(i) * a2);
  }
  for (std::size_t r = 0; r < rows2.size(); ++r) {
    const auto j = static_cast<Eigen::Index>(rows2[r]);
    if (j >= a2.rows()) throw DataError("ot_embedding_gradient: domain 2 row out of range");
    const double mass = plan.col(j).sum();
    g.second.row(static_cast<Eigen::Index>(r)) = 2.0 * (mass * a2.row(j) - plan.col(j).transpose() * a1);
  }
  return g;
}

void write_plan_tsv(const TransportState& s, const EntityVocab& names1, const EntityVocab& names2,
                    const std::filesystem::path& path) {
  if (static_cast<std::size_t>(s.plan.rows()) != names1.size() ||
      static_cast<std::size_t>(s.plan.cols()) != names2.size()) {
    throw DataError("write_plan_tsv: plan shape does not match vocabularies");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& n : names2.names()) out << '\t' << n;
  out << '\n';
  for (Eigen::Index i = 0; i < s.plan.rows(); ++i) {
    out << names1.name(static_cast<std::uint32_t>(i));
    for (Eigen::Index j = 0; j < s.plan.cols(); ++j) out << '\t' << format_double(s.plan(i, j));
    out << '\n';
  }
}

}  // namespace idlp
