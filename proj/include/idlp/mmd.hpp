#pragma once

#include <span>
#include <vector>

#include "idlp/model.hpp"

namespace idlp {

// Mixture of Gaussian kernels k_s(x, y) = exp(-||x - y||^2 / (2 s^2)) with
// bandwidths s = multiplier * base_scale.
struct KernelMixture {
  std::vector<double> multipliers{0.25, 0.5, 1.0, 2.0, 4.0};
  double base_scale = 1.0;

  // Throws ConfigError for empty or non-positive multipliers or scale.
  void validate() const;
};

inline constexpr double kBaseScaleFloor = 1e-8;

struct BaseScale {
  double value = 0.0;
  bool degenerate = false;  // every point coincided; value is the floor
};

// Mean Euclidean distance over all unordered pairs of the pooled rows of both
// matrices. Throws DataError with fewer than two points in total.
BaseScale base_scale(const RowMatrix& a1, const RowMatrix& a2);

// Unbiased MMD estimate summed over the mixture components:
//   1/(n1(n1-1)) sum_{i != i'} k(a1_i, a1_i') + 1/(n2(n2-1)) sum_{j != j'} k(a2_j, a2_j')
//   - 2/(n1 n2) sum_{i,j} k(a1_i, a2_j)
// The cross sum is accumulated in sorted order of the pair distances, so
// swapping the arguments gives a bitwise identical result.
// Throws DataError if either sample has fewer than two rows.
double mmd_unbiased(const RowMatrix& a1, const RowMatrix& a2, const KernelMixture& kernel);

// Gradient of mmd_unbiased with base_scale held constant, for the requested
// rows; row r of `first` belongs to rows1[r].
struct MmdGradient {
  RowMatrix first;
  RowMatrix second;
};
MmdGradient mmd_gradient(const RowMatrix& a1, const RowMatrix& a2, const KernelMixture& kernel,
                         std::span<const Eigen::Index> rows1, std::span<const Eigen::Index> rows2);

}  // namespace idlp
