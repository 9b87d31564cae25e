#include "idlp/mmd.hpp"

#include <algorithm>
#include <cmath>

namespace idlp {
namespace {

void check_samples(const RowMatrix& a1, const RowMatrix& a2) {
  if (a1.rows() < 2 || a2.rows() < 2) throw DataError("MMD needs at least two points per sample");
  if (a1.cols() != a2.cols()) throw DataError("MMD samples have different widths");
}

double inv_two_sigma_sq(double multiplier, double scale) {
  const double s = multiplier * scale;
  return 1.0 / (2.0 * s * s);
}

// Sum over i != i' of k(a_i, a_i'), for every component.
std::vector<double> within_sums(const RowMatrix& a, const KernelMixture& kernel) {
  std::vector<double> sums(kernel.multipliers.size(), 0.0);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = i + 1; k < a.rows(); ++k) {
      const double d2 = (a.row(i) - a.row(k)).squaredNorm();
      for (std::size_t c = 0; c < sums.size(); ++c) {
        sums[c] += 2.0 * std::exp(-d2 * inv_two_sigma_sq(kernel.multipliers[c], kernel.base_scale));
      }
    }
  }
  return sums;
}

// Adds d/dx of `weight * sum_y k(x, y)` over the rows y of `others`, skipping
// row `skip` (pass -1 to keep all).
void add_kernel_gradient(const Eigen::RowVectorXd& x, const RowMatrix& others, Eigen::Index skip,
                         double weight, const KernelMixture& kernel, Eigen::Ref<Eigen::RowVectorXd> out) {
  for (Eigen::Index k = 0; k < others.rows(); ++k) {
    if (k == skip) continue;
    const Eigen::RowVectorXd diff = x - others.row(k);
    const double d2 = diff.squaredNorm();
    double coeff = 0.0;
    for (double m : kernel.multipliers) {
      const double g = inv_two_sigma_sq(m, kernel.base_scale);
      // d/dx exp(-g ||x - y||^2) = -2 g k(x, y) (x - y), and 2 g = 1 / sigma^2
      coeff -= 2.0 * g * std::exp(-g * d2);
    }
    out += (weight * coeff) * diff;
  }
}

}  // namespace

void KernelMixture::validate() const {
  if (multipliers.empty()) throw ConfigError("kernel mixture needs at least one bandwidth");
  for (double m : multipliers) {
    if (!(m > 0.0) || !std::isfinite(m)) throw ConfigError("kernel bandwidth multipliers must be positive");
  }
  if (!(base_scale > 0.0) || !std::isfinite(base_scale)) throw ConfigError("kernel base scale must be positive");
}

BaseScale base_scale(const RowMatrix& a1, const RowMatrix& a2) {
  if (a1.cols() != a2.cols()) throw DataError("base_scale: sample widths differ");
  RowMatrix pooled(a1.rows() + a2.rows(), a1.cols());
  pooled << a1, a2;
  const Eigen::Index n = pooled.rows();
  if (n < 2) throw DataError("base_scale needs at least two points");
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = i + 1; k < n; ++k) total += (pooled.row(i) - pooled.row(k)).norm();
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double mean = total / pairs;
  if (!(mean > 0.0)) return {kBaseScaleFloor, true};
  return {mean, false};
}

double mmd_unbiased(const RowMatrix& a1, const RowMatrix& a2, const KernelMixture& kernel) {
  check_samples(a1, a2);
  kernel.validate();
  const double n1 = static_cast<double>(a1.rows());
  const double n2 = static_cast<double>(a2.rows());

  std::vector<double> cross_d2;
  cross_d2.reserve(static_cast<std::size_t>(a1.rows() * a2.rows()));
  for (Eigen::Index i = 0; i < a1.rows(); ++i) {
    for (Eigen::Index j = 0; j < a2.rows(); ++j) cross_d2.push_back((a1.row(i) - a2.row(j)).squaredNorm());
  }
  std::sort(cross_d2.begin(), cross_d2.end());

  const auto w1 = within_sums(a1, kernel);
  const auto w2 = within_sums(a2, kernel);
  double total = 0.0;
  for (std::size_t c = 0; c < kernel.multipliers.size(); ++c) {
    const double g = inv_two_sigma_sq(kernel.multipliers[c], kernel.base_scale);
    double cross = 0.0;
    for (double d2 : cross_d2) cross += std::exp(-d2 * g);
    const double t1 = w1[c] / (n1 * (n1 - 1.0));
    const double t2 = w2[c] / (n2 * (n2 - 1.0));
    total += (t1 + t2) - 2.0 * cross / (n1 * n2);
  }
  return total;
}

MmdGradient mmd_gradient(const RowMatrix& a1, const RowMatrix& a2, const KernelMixture& kernel,
                         std::span<const Eigen::Index> rows1, std::span<const Eigen::Index> rows2) {
  check_samples(a1, a2);
  kernel.validate();
  const double n1 = static_cast<double>(a1.rows());
  const double n2 = static_cast<double>(a2.rows());
  const double within1 = 2.0 / (n1 * (n1 - 1.0));
  const double within2 = 2.0 / (n2 * (n2 - 1.0));
  const double cross = -2.0 / (n1 * n2);

  MmdGradient g;
  g.first = RowMatrix::Zero(static_cast<Eigen::Index>(rows1.size()), a1.cols());
  g.second = RowMatrix::Zero(static_cast<Eigen::Index>(rows2.size()), a1.cols());
  for (std::size_t r = 0; r < rows1.size(); ++r) {
    const Eigen::Index i = rows1[r];
    if (i < 0 || i >= a1.rows()) throw DataError("mmd_gradient: domain 1 row out of range");
    const Eigen::RowVectorXd x = a1.row(i);
    auto out = g.first.row(static_cast<Eigen::Index>(r));
    add_kernel_gradient(x, a1, i, within1, kernel, out);
    add_kernel_gradient(x, a2, -1, cross, kernel, out);
  }
  for (std::size_t r = 0; r < rows2.size(); ++r) {
    const Eigen::Index j = rows2[r];
    if (j < 0 || j >= a2.rows()) throw DataError("mmd_gradient: domain 2 row out of range");
    const Eigen::RowVectorXd y = a2.row(j);
    auto out = g.second.row(static_cast<Eigen::Index>(r));
    add_kernel_gradient(y, a2, j, within2, kernel, out);
    add_kernel_gradient(y, a1, -1, cross, kernel, out);
  }
  return g;
}

}  // namespace idlp
