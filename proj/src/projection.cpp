#include "idlp/projection.hpp"

#include <Eigen/Eigenvalues>

#include "idlp/errors.hpp"

namespace idlp {

Projection principal_components_2d(const RowMatrix& points) {
  if (points.rows() < 2 || points.cols() < 2) throw DataError("projection needs at least 2 rows and 2 columns");
  const Eigen::RowVectorXd mean = points.colwise().mean();
  const RowMatrix centered = points.rowwise() - mean;
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(points.rows() - 1);

  // Eigenvalues come back ascending.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw DataError("eigen decomposition failed");
  const Eigen::Index d = cov.rows();

  Projection p;
  p.components.resize(d, 2);
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXd v = solver.eigenvectors().col(d - 1 - c);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    p.components.col(c) = v;
    p.variances(c) = std::max(0.0, solver.eigenvalues()(d - 1 - c));
  }
  p.coords = centered * p.components;
  return p;
}

}  // namespace idlp
