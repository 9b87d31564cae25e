#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "idlp/mmd.hpp"

using namespace idlp;

namespace {

oracle::Vec sigmas(const KernelMixture& k) {
  oracle::Vec s;
  for (double m : k.multipliers) s.push_back(m * k.base_scale);
  return s;
}

std::vector<Eigen::Index> all_rows(Eigen::Index n) {
  std::vector<Eigen::Index> r(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = i;
  return r;
}

}  // namespace

TEST_CASE("base scale examples") {
  RowMatrix a(1, 2), b(1, 2);
  a << 0, 0;
  b << 3, 4;
  CHECK(base_scale(a, b).value == doctest::Approx(5.0));

  RowMatrix x(2, 1), y(1, 1);
  x << 0, 1;
  y << 2;
  CHECK(base_scale(x, y).value == doctest::Approx(4.0 / 3.0));

  std::mt19937_64 rng(5);
  const RowMatrix p = testing::random_rows(20, 4, rng), q = testing::random_rows(20, 4, rng);
  const auto s = base_scale(p, q);
  CHECK_FALSE(s.degenerate);
  CHECK(s.value == doctest::Approx(oracle::mean_distance(testing::to_mat(p), testing::to_mat(q))).epsilon(1e-12));

  const RowMatrix same = RowMatrix::Ones(3, 2);
  const auto d = base_scale(same, same);
  CHECK(d.degenerate);
  CHECK(d.value == kBaseScaleFloor);
  CHECK_THROWS_AS(base_scale(RowMatrix(1, 2), RowMatrix(0, 2)), DataError);
}

TEST_CASE("two-point samples reduce to kernel differences") {
  // x = {p, p}, y = {q, q}: within terms are k(0) = 1, cross is k(p, q).
  RowMatrix x(2, 1), y(2, 1);
  x << 0, 0;
  y << 1, 1;
  KernelMixture k{{1.0}, 1.0};
  const double kpq = std::exp(-0.5);
  CHECK(mmd_unbiased(x, y, k) == doctest::Approx(2.0 - 2.0 * kpq).epsilon(1e-14));
}

TEST_CASE("mmd matches the double-loop oracle") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const RowMatrix x = testing::random_rows(7, 3, rng), y = testing::random_rows(9, 3, rng);
    KernelMixture k;
    k.base_scale = base_scale(x, y).value;
    const double expected = oracle::mmd(testing::to_mat(x), testing::to_mat(y), sigmas(k));
    CHECK(std::abs(mmd_unbiased(x, y, k) - expected) < 1e-10);
  }
}

TEST_CASE("mmd properties") {
  std::mt19937_64 rng(4);
  const RowMatrix x = testing::random_rows(11, 5, rng), y = testing::random_rows(8, 5, rng);
  KernelMixture k;
  k.base_scale = 1.7;

  SUBCASE("symmetric bit for bit") { CHECK(mmd_unbiased(x, y, k) == mmd_unbiased(y, x, k)); }

  SUBCASE("bounded by twice the component count") {
    CHECK(std::abs(mmd_unbiased(x, y, k)) <= 2.0 * static_cast<double>(k.multipliers.size()));
  }

  SUBCASE("far translation leaves only the within terms") {
    const RowMatrix far = y.rowwise() + Eigen::RowVectorXd::Constant(5, 1e3);
    const auto s = sigmas(k);
    const auto xm = testing::to_mat(x), ym = testing::to_mat(y);
    // Within-sample averages, from the oracle with an empty cross sum.
    const double within = oracle::mmd(xm, ym, s) + 2.0 * [&] {
      double c = 0.0;
      for (const auto& a : xm) {
        for (const auto& b : ym) {
          for (double sig : s) c += std::exp(-oracle::squared_distance(a, b) / (2.0 * sig * sig));
        }
      }
      return c / static_cast<double>(xm.size() * ym.size());
    }();
    CHECK(mmd_unbiased(x, far, k) == doctest::Approx(within).epsilon(1e-12));
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(mmd_unbiased(x.topRows(1), y, k), DataError);
    CHECK_THROWS_AS(mmd_unbiased(x, y.leftCols(2), k), DataError);
    CHECK_THROWS_AS(mmd_unbiased(x, y, KernelMixture{{}, 1.0}), ConfigError);
    CHECK_THROWS_AS(mmd_unbiased(x, y, KernelMixture{{1.0, -2.0}, 1.0}), ConfigError);
  }
}

TEST_CASE("mmd gradient against central differences") {
  std::mt19937_64 rng(88);
  for (int trial = 0; trial < 10; ++trial) {
    RowMatrix x = testing::random_rows(5, 3, rng), y = testing::random_rows(6, 3, rng);
    KernelMixture k;
    k.base_scale = base_scale(x, y).value;
    const auto r1 = all_rows(5), r2 = all_rows(6);
    const auto g = mmd_gradient(x, y, k, r1, r2);
    oracle::Vec analytic;
    for (int i = 0; i < 5; ++i) {
      for (int c = 0; c < 3; ++c) analytic.push_back(g.first(i, c));
    }
    for (int j = 0; j < 6; ++j) {
      for (int c = 0; c < 3; ++c) analytic.push_back(g.second(j, c));
    }
    const auto s = sigmas(k);
    auto objective = [&] { return oracle::mmd(testing::to_mat(x), testing::to_mat(y), s); };
    const auto numeric = oracle::central_differences(33, objective, [&](std::size_t idx) -> double& {
      if (idx < 15) return x(static_cast<Eigen::Index>(idx / 3), static_cast<Eigen::Index>(idx % 3));
      return y(static_cast<Eigen::Index>((idx - 15) / 3), static_cast<Eigen::Index>((idx - 15) % 3));
    });
    CHECK(oracle::relative_error(analytic, numeric) < 1e-6);
  }
}

TEST_CASE("mmd gradient on a subset of rows") {
  std::mt19937_64 rng(13);
  const RowMatrix x = testing::random_rows(6, 2, rng), y = testing::random_rows(4, 2, rng);
  KernelMixture k;
  const auto full = mmd_gradient(x, y, k, all_rows(6), all_rows(4));
  const std::vector<Eigen::Index> r1{4, 1}, r2{3};
  const auto part = mmd_gradient(x, y, k, r1, r2);
  CHECK((part.first.row(0) - full.first.row(4)).norm() < 1e-14);
  CHECK((part.first.row(1) - full.first.row(1)).norm() < 1e-14);
  CHECK((part.second.row(0) - full.second.row(3)).norm() < 1e-14);
}

TEST_CASE("mirror-image samples have mirror-image gradients") {
  std::mt19937_64 rng(3);
  const RowMatrix x = testing::random_rows(4, 3, rng);
  const RowMatrix y = -x;
  KernelMixture k;
  k.base_scale = 1.0;
  const auto g = mmd_gradient(x, y, k, all_rows(4), all_rows(4));
  CHECK((g.first + g.second).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("coincident samples sit at a stationary point") {
  std::mt19937_64 rng(17);
  const RowMatrix x = testing::random_rows(5, 3, rng);
  KernelMixture k;
  const auto g = mmd_gradient(x, x, k, all_rows(5), all_rows(5));
  CHECK(mmd_unbiased(x, x, k) < 0.0);  // unbiased estimator dips below zero
  CHECK(g.first.allFinite());
  CHECK(g.second.allFinite());
}

TEST_CASE("mmd separates distant samples from same-distribution samples") {
  std::mt19937_64 rng(2024);
  int separated = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const RowMatrix x = testing::random_rows(500, 2, rng);
    const RowMatrix same = testing::random_rows(500, 2, rng);
    const RowMatrix far = testing::random_rows(500, 2, rng).rowwise() + Eigen::RowVector2d(4.0, 0.0);
    KernelMixture near_kernel, far_kernel;
    near_kernel.base_scale = base_scale(x, same).value;
    far_kernel.base_scale = base_scale(x, far).value;
    if (mmd_unbiased(x, far, far_kernel) > mmd_unbiased(x, same, near_kernel)) ++separated;
  }
  CHECK(separated >= 95);
}
