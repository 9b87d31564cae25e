#include <cmath>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "idlp/checkpoint.hpp"
#include "idlp/gradients.hpp"
#include "idlp/negative_sampler.hpp"

using namespace idlp;

namespace {

// Ranking loss recomputed from scores only; used as the finite-difference target.
double pair_loss(const EmbeddingModel& m, const TaggedTriplet& pos, const TaggedTriplet& neg) {
  return margin_loss(score(m, pos), score(m, neg));
}

}  // namespace

TEST_CASE("slot layout follows the common pairs") {
  CHECK(EmbeddingModel(testing::empty_pair(3, 3, 1, 1), 4).slot_count() == 5);
  CHECK(EmbeddingModel(testing::empty_pair(3, 3, 0, 1), 4).slot_count() == 6);
  const EmbeddingModel m(testing::empty_pair(4, 3, 2, 2), 3);
  CHECK(m.slot({Domain::kFirst, 1}) == m.slot({Domain::kSecond, 1}));
  CHECK(m.slot({Domain::kSecond, 2}) == 4);
  CHECK_THROWS_AS(m.slot({Domain::kSecond, 3}), DataError);
  CHECK_THROWS_AS(EmbeddingModel(testing::empty_pair(2, 2, 0, 1), 0), ConfigError);
}

TEST_CASE("initialization is seeded and scaled") {
  const DomainPair p = testing::empty_pair(200, 200, 10, 3);
  const auto a = EmbeddingModel::initialize(p, 16, 5);
  const auto b = EmbeddingModel::initialize(p, 16, 5);
  CHECK(a == b);
  CHECK_FALSE(a == EmbeddingModel::initialize(p, 16, 6));
  const double var = a.slots().array().square().mean();
  CHECK(var == doctest::Approx(1.0 / 16).epsilon(0.1));
  CHECK(std::abs(a.slots().mean()) < 0.02);
}

TEST_CASE("score examples") {
  EmbeddingModel m(testing::empty_pair(2, 1, 0, 2), 2);
  m.slots().row(0) << 1, 0;
  m.slots().row(1) << 1, 2;
  m.slots().row(2) << 3, 4;
  m.relation(0) = Eigen::Matrix2d::Identity();
  m.relation(1) << 0, 1, 0, 0;
  CHECK(score(m, {Domain::kFirst, 0}, 0, {Domain::kFirst, 0}) == 1.0);
  CHECK(score(m, {Domain::kFirst, 1}, 1, {Domain::kSecond, 0}) == 4.0);
  CHECK_THROWS_AS(score(m, {Domain::kFirst, 0}, 2, {Domain::kFirst, 0}), DataError);
}

TEST_CASE("score matches an explicit triple product and is bilinear") {
  std::mt19937_64 rng(17);
  const DomainPair p = testing::empty_pair(4, 4, 1, 3);
  EmbeddingModel m = EmbeddingModel::initialize(p, 6, 99);
  const Endpoint h{Domain::kFirst, 2}, t{Domain::kSecond, 3};
  oracle::Mat r(6, oracle::Vec(6));
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) r[i][j] = m.relation(1)(i, j);
  }
  const double expected = oracle::triple_product(testing::row_of(m.slots(), m.slot(h)), r,
                                                 testing::row_of(m.slots(), m.slot(t)));
  CHECK(std::abs(score(m, h, 1, t) - expected) < 1e-12);

  const double before = score(m, h, 1, t);
  m.slots().row(m.slot(h)) *= 2.5;
  CHECK(score(m, h, 1, t) == doctest::Approx(2.5 * before).epsilon(1e-12));
}

TEST_CASE("margin loss") {
  CHECK(margin_loss(2.0, 0.5) == 0.0);
  CHECK(margin_loss(0.7, 0.7) == 1.0);
  CHECK(margin_loss(0.0, 0.3) == doctest::Approx(1.3));
}

TEST_CASE("negative sampling") {
  SUBCASE("two-entity domain has one choice") {
    NegativeSampler s(2, 5, 1);
    const TaggedTriplet pos = intra(Domain::kFirst, {0, 0, 1});
    const auto neg = s.corrupt(pos, NegativeSampler::Side::kHead);
    CHECK(neg == intra(Domain::kFirst, {1, 0, 1}));
  }
  SUBCASE("degenerate domain") {
    NegativeSampler s(1, 5, 1);
    CHECK_THROWS_AS(s.corrupt(intra(Domain::kFirst, {0, 0, 0}), NegativeSampler::Side::kTail), DataError);
  }
  SUBCASE("uniform within the same domain, never the original") {
    constexpr int kDraws = 100000;
    constexpr std::size_t n1 = 7, n2 = 11;
    NegativeSampler s(n1, n2, 123);
    const TaggedTriplet pos{{3, 0, 4}, Domain::kSecond, Domain::kSecond};
    std::vector<int> counts(n2, 0);
    for (int i = 0; i < kDraws; ++i) {
      const auto neg = s.corrupt(pos);
      REQUIRE(neg.head_domain == Domain::kSecond);
      REQUIRE(neg.tail_domain == Domain::kSecond);
      const bool head_changed = neg.fact.head != pos.fact.head;
      const bool tail_changed = neg.fact.tail != pos.fact.tail;
      REQUIRE(head_changed != tail_changed);
      REQUIRE(neg.fact.predicate == pos.fact.predicate);
      if (tail_changed) ++counts[neg.fact.tail];
    }
    CHECK(counts[4] == 0);
    int total = 0;
    for (int c : counts) total += c;
    // Each of the 10 alternatives: binomial(total, 1/10) within 3 sigma.
    const double expect = total / 10.0;
    const double sigma = std::sqrt(total * 0.1 * 0.9);
    double chi2 = 0.0;
    for (std::size_t e = 0; e < n2; ++e) {
      if (e == 4) continue;
      CHECK(std::abs(counts[e] - expect) < 3.0 * sigma);
      chi2 += (counts[e] - expect) * (counts[e] - expect) / expect;
    }
    CHECK(chi2 < 27.88);  // chi-square, 9 dof, p = 0.001
  }
}

TEST_CASE("ranking gradient: inactive hinge contributes nothing") {
  EmbeddingModel m(testing::empty_pair(2, 0, 0, 1), 2);
  m.slots().row(0) << 2, 0;
  m.slots().row(1) << 1, 0;
  m.relation(0) = Eigen::Matrix2d::Identity();
  // f_pos = 4, f_neg = 2
  SparseGradient g(2);
  const double loss = accumulate_ranking_gradient(m, intra(Domain::kFirst, {0, 0, 0}),
                                                  intra(Domain::kFirst, {0, 0, 1}), g);
  CHECK(loss == 0.0);
  CHECK(g.empty());
}

TEST_CASE("ranking gradient: shared head row is R a_t- - R a_t+") {
  std::mt19937_64 rng(3);
  const DomainPair p = testing::empty_pair(3, 0, 0, 1);
  EmbeddingModel m = EmbeddingModel::initialize(p, 3, 8);
  const auto pos = intra(Domain::kFirst, {0, 0, 1});
  const auto neg = intra(Domain::kFirst, {0, 0, 2});
  REQUIRE(pair_loss(m, pos, neg) > 0.0);
  SparseGradient g(3);
  accumulate_ranking_gradient(m, pos, neg, g);
  const Eigen::VectorXd expected =
      m.relation(0) * m.slots().row(2).transpose() - m.relation(0) * m.slots().row(1).transpose();
  CHECK((g.rows().at(0) - expected).norm() < 1e-14);
}

TEST_CASE("ranking gradient matches central differences, including tied slots") {
  std::mt19937_64 rng(2024);
  const DomainPair p = testing::empty_pair(4, 4, 2, 2);
  int checked = 0;
  for (int trial = 0; checked < 100 && trial < 1000; ++trial) {
    EmbeddingModel m = EmbeddingModel::initialize(p, 3, rng());
    std::uniform_int_distribution<EntityId> ent(0, 3);
    std::uniform_int_distribution<PredicateId> pred(0, 1);
    std::bernoulli_distribution second(0.5);
    const Domain d = second(rng) ? Domain::kSecond : Domain::kFirst;
    const TaggedTriplet pos = intra(d, {ent(rng), pred(rng), ent(rng)});
    TaggedTriplet neg = pos;
    (second(rng) ? neg.fact.head : neg.fact.tail) = ent(rng);
    if (neg == pos) continue;
    const double loss = pair_loss(m, pos, neg);
    if (loss < 1e-3) continue;  // keep clear of the kink

    SparseGradient g(3);
    accumulate_ranking_gradient(m, pos, neg, g);
    oracle::Vec analytic, numeric;
    for (std::size_t s = 0; s < m.slot_count(); ++s) {
      for (int j = 0; j < 3; ++j) analytic.push_back(g.rows().count(s) ? g.rows().at(s)(j) : 0.0);
    }
    for (PredicateId k = 0; k < 2; ++k) {
      for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) analytic.push_back(g.relations().count(k) ? g.relations().at(k)(i, j) : 0.0);
      }
    }
    const std::size_t n_slot_params = m.slot_count() * 3;
    numeric = oracle::central_differences(
        n_slot_params + 2 * 9, [&] { return pair_loss(m, pos, neg); },
        [&](std::size_t idx) -> double& {
          if (idx < n_slot_params) return m.slots()(static_cast<Eigen::Index>(idx / 3), static_cast<Eigen::Index>(idx % 3));
          const std::size_t r = idx - n_slot_params;
          return m.relation(static_cast<PredicateId>(r / 9))(static_cast<Eigen::Index>(r % 3),
                                                            static_cast<Eigen::Index>((r % 9) / 3));
        });
    CHECK(oracle::relative_error(analytic, numeric) < 1e-4);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("frobenius gradient") {
  EmbeddingModel m(testing::empty_pair(2, 0, 0, 1), 2);
  m.slots().row(0) << 1, -1;
  m.relation(0) << 1, 2, 3, 4;
  const std::size_t slots[] = {0};
  const PredicateId rels[] = {0};
  SUBCASE("mu = 0") {
    SparseGradient g(2);
    accumulate_frobenius_gradient(m, 0.0, slots, rels, g);
    CHECK(g.empty());
  }
  SUBCASE("mu = 2") {
    SparseGradient g(2);
    accumulate_frobenius_gradient(m, 2.0, slots, rels, g);
    CHECK(g.rows().at(0) == Eigen::Vector2d(2, -2));
    CHECK(g.relations().at(0) == 2.0 * m.relation(0));
    CHECK(g.rows().count(1) == 0);
  }
  SUBCASE("finite differences of mu/2 ||x||^2") {
    std::mt19937_64 rng(5);
    EmbeddingModel r = EmbeddingModel::initialize(testing::empty_pair(3, 0, 0, 1), 3, 4);
    const double mu = 0.37;
    auto reg = [&] { return 0.5 * mu * (r.slots().row(1).squaredNorm() + r.relation(0).squaredNorm()); };
    const std::size_t s1[] = {1};
    SparseGradient g(3);
    accumulate_frobenius_gradient(r, mu, s1, rels, g);
    oracle::Vec analytic;
    for (int j = 0; j < 3; ++j) analytic.push_back(g.rows().at(1)(j));
    for (int i = 0; i < 9; ++i) analytic.push_back(g.relations().at(0)(i % 3, i / 3));
    const auto numeric = oracle::central_differences(12, reg, [&](std::size_t i) -> double& {
      if (i < 3) return r.slots()(1, static_cast<Eigen::Index>(i));
      return r.relation(0)(static_cast<Eigen::Index>((i - 3) % 3), static_cast<Eigen::Index>((i - 3) / 3));
    });
    for (std::size_t i = 0; i < analytic.size(); ++i) CHECK(std::abs(analytic[i] - numeric[i]) < 1e-6);
  }
}

TEST_CASE("tied rows stay identical through SGD updates") {
  const DomainPair p = testing::empty_pair(3, 3, 1, 1);
  EmbeddingModel m = EmbeddingModel::initialize(p, 4, 1);
  for (int step = 0; step < 20; ++step) {
    SparseGradient g(4);
    accumulate_ranking_gradient(m, intra(Domain::kSecond, {0, 0, 1}), intra(Domain::kSecond, {2, 0, 1}), g);
    accumulate_ranking_gradient(m, intra(Domain::kFirst, {1, 0, 0}), intra(Domain::kFirst, {1, 0, 2}), g);
    g.apply(m, 0.1);
  }
  CHECK(m.embedding({Domain::kFirst, 0}) == m.embedding({Domain::kSecond, 0}));
}

TEST_CASE("checkpoint round trip is exact") {
  const DomainPair p = testing::empty_pair(5, 4, 2, 3);
  const EmbeddingModel m = EmbeddingModel::initialize(p, 7, 77);
  std::stringstream buf;
  write_checkpoint(m, buf);
  const std::string text = buf.str();
  CHECK(text.rfind("7 3 7\n", 0) == 0);
  const EmbeddingModel back = read_checkpoint(buf);
  CHECK(back == m);

  std::stringstream again;
  write_checkpoint(back, again);
  CHECK(again.str() == text);

  std::istringstream truncated(text.substr(0, text.size() / 2));
  CHECK_THROWS_AS(read_checkpoint(truncated), DataError);
}
