#pragma once

#include <Eigen/Dense>

#include "idlp/model.hpp"

namespace idlp {

struct Projection {
  RowMatrix coords;             // n x 2, centered scores on the top two components
  Eigen::Vector2d variances;    // sample variance along each component, descending
  Eigen::Matrix<double, Eigen::Dynamic, 2> components;  // d x 2 unit loadings
};

// Top-two principal components of the rows. Each loading's largest-magnitude
// entry is made positive so the output does not depend on solver sign.
// Throws DataError for fewer than two rows or width below two.
Projection principal_components_2d(const RowMatrix& points);

}  // namespace idlp
