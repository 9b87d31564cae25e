#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "idlp/evaluation.hpp"
#include "idlp/synthetic.hpp"

using namespace idlp;

namespace {

// One-dimensional model over a single domain with R = [1], so
// score(h, t) = a_h * a_t.
EmbeddingModel scalar_model(const std::vector<double>& a) {
  RowMatrix slots(static_cast<Eigen::Index>(a.size()), 1);
  std::vector<std::size_t> map1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    slots(static_cast<Eigen::Index>(i), 0) = a[i];
    map1.push_back(i);
  }
  return EmbeddingModel(1, slots, {Eigen::MatrixXd::Ones(1, 1)}, map1, {});
}

TaggedTriplet fact(Domain hd, EntityId h, PredicateId p, Domain td, EntityId t) {
  return {{h, p, t}, hd, td};
}

}  // namespace

TEST_CASE("AUC examples") {
  const std::vector<double> pos{0.9, 0.8}, neg{0.1, 0.85};
  CHECK(auc_from_scores(pos, neg) == 0.75);
  const std::vector<double> same(20, 0.3);
  CHECK(auc_from_scores(same, same) == 0.5);
  const std::vector<double> low{0.0}, high{1.0};
  CHECK(auc_from_scores(high, low) == 1.0);
  CHECK(auc_from_scores(low, high) == 0.0);
  CHECK_THROWS_AS(auc_from_scores({}, neg), DataError);
}

TEST_CASE("AUC equals pairwise counting, ties included") {
  std::mt19937_64 rng(50);
  std::uniform_int_distribution<int> coarse(0, 9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> pos, neg;
    for (int i = 0; i < 37; ++i) pos.push_back(coarse(rng) / 10.0 + 0.05);
    for (int i = 0; i < 29; ++i) neg.push_back(coarse(rng) / 10.0);
    for (int i = 0; i < 8; ++i) neg.push_back(pos[static_cast<std::size_t>(i)]);
    CHECK(auc_from_scores(pos, neg) == oracle::pair_count_auc(pos, neg));
  }
}

TEST_CASE("AUC is invariant to strictly increasing transforms") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> pos, neg, tpos, tneg;
  for (int i = 0; i < 200; ++i) {
    pos.push_back(n(rng) + 0.5);
    neg.push_back(n(rng));
  }
  for (double v : pos) tpos.push_back(std::exp(3.0 * v) - 7.0);
  for (double v : neg) tneg.push_back(std::exp(3.0 * v) - 7.0);
  CHECK(auc_from_scores(tpos, tneg) == auc_from_scores(pos, neg));
}

TEST_CASE("AUC of exchangeable scores averages one half") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0.0, 1.0);
  double total = 0.0;
  for (int seed = 0; seed < 200; ++seed) {
    std::vector<double> pos, neg;
    for (int i = 0; i < 100; ++i) {
      pos.push_back(n(rng));
      neg.push_back(n(rng));
    }
    total += auc_from_scores(pos, neg);
  }
  // Each AUC has standard deviation about 0.041; the mean of 200 about 0.003.
  CHECK(std::abs(total / 200.0 - 0.5) < 0.012);
}

TEST_CASE("a uniquely top-scoring truth has Hit@10 of one") {
  const DomainPair p = testing::empty_pair(3, 0, 0, 1);
  const EmbeddingModel m = scalar_model({1, 5, 2});
  TaggedStore test;
  test.insert(fact(Domain::kFirst, 1, 0, Domain::kFirst, 1));
  const auto r = hit_at_10(m, test, p);
  CHECK(r.ranks == std::vector<std::size_t>{1, 1});
  CHECK(r.hit_at_10 == 1.0);
}

TEST_CASE("random model on a large domain hits about 10 in 2000") {
  const DomainPair p = testing::empty_pair(2000, 0, 0, 2);
  const EmbeddingModel m = EmbeddingModel::initialize(p, 16, 3);
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<EntityId> e(0, 1999);
  std::uniform_int_distribution<PredicateId> r(0, 1);
  TaggedStore test;
  while (test.size() < 2000) test.insert(fact(Domain::kFirst, e(rng), r(rng), Domain::kFirst, e(rng)));
  const auto result = hit_at_10(m, test, p);
  const double expected = 10.0 / 2000.0;
  const double sd = std::sqrt(expected * (1.0 - expected) / static_cast<double>(result.queries));
  CHECK(std::abs(result.hit_at_10 - expected) < 4.0 * sd);
}

TEST_CASE("Hit@10 ranks on a four-entity example") {
  const DomainPair p = testing::empty_pair(4, 0, 0, 1);
  const EmbeddingModel m = scalar_model({3, 1, 4, 2});
  TaggedStore test;
  test.insert(fact(Domain::kFirst, 3, 0, Domain::kFirst, 1));
  // Hiding the head: scores {3,1,4,2}, truth 2 is beaten by 3 and 4.
  // Hiding the tail: scores 2*{3,1,4,2}, truth 2 is beaten by 6, 8 and 4.
  const auto r = hit_at_10(m, test, p);
  REQUIRE(r.ranks.size() == 2);
  CHECK(r.ranks[0] == 3);
  CHECK(r.ranks[1] == 4);
  CHECK(r.queries == 2);
  CHECK(r.hit_at_10 == 1.0);
}

TEST_CASE("filtered ranking skips other known facts") {
  DomainPair p = testing::empty_pair(4, 0, 0, 1);
  p.train1.insert({2, 0, 1});
  const EmbeddingModel m = scalar_model({3, 1, 4, 2});
  TaggedStore test;
  test.insert(fact(Domain::kFirst, 3, 0, Domain::kFirst, 1));
  const auto r = hit_at_10(m, test, p, RankingMode::kFiltered);
  CHECK(r.ranks[0] == 2);
  CHECK(r.ranks[1] == 4);
}

TEST_CASE("Hit@10 with more than ten candidates") {
  std::vector<double> a(12);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<double>(i + 1);
  const DomainPair p = testing::empty_pair(12, 0, 0, 1);
  const EmbeddingModel m = scalar_model(a);
  TaggedStore test;
  test.insert(fact(Domain::kFirst, 0, 0, Domain::kFirst, 11));  // head rank 12, tail rank 1
  test.insert(fact(Domain::kFirst, 1, 0, Domain::kFirst, 2));   // head rank 11, tail rank 10
  const auto r = hit_at_10(m, test, p);
  CHECK(r.ranks == std::vector<std::size_t>{12, 1, 11, 10});
  CHECK(r.hit_at_10 == 0.5);
}

TEST_CASE("ranks match a brute-force oracle") {
  std::mt19937_64 rng(71);
  const DomainPair p = testing::empty_pair(9, 7, 2, 3);
  const EmbeddingModel m = EmbeddingModel::initialize(p, 4, 5);
  TaggedStore test;
  std::uniform_int_distribution<int> coin(0, 1);
  for (int i = 0; i < 40; ++i) {
    const Domain hd = coin(rng) ? Domain::kFirst : Domain::kSecond;
    const Domain td = coin(rng) ? Domain::kFirst : Domain::kSecond;
    std::uniform_int_distribution<EntityId> h(0, static_cast<EntityId>(p.entity_count(hd) - 1));
    std::uniform_int_distribution<EntityId> t(0, static_cast<EntityId>(p.entity_count(td) - 1));
    std::uniform_int_distribution<PredicateId> r(0, 2);
    test.insert(fact(hd, h(rng), r(rng), td, t(rng)));
  }
  const auto result = hit_at_10(m, test, p);
  REQUIRE(result.ranks.size() == 2 * test.size());

  auto vec = [&](Endpoint e) { return testing::row_of(m.slots(), static_cast<Eigen::Index>(m.slot(e))); };
  auto rel = [&](PredicateId k) {
    oracle::Mat r(4, oracle::Vec(4));
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) r[i][j] = m.relation(k)(i, j);
    }
    return r;
  };
  std::size_t q = 0;
  std::size_t hits = 0;
  for (const auto& f : test) {
    for (bool hide_head : {true, false}) {
      const Domain d = hide_head ? f.head_domain : f.tail_domain;
      oracle::Vec scores;
      for (EntityId c = 0; c < p.entity_count(d); ++c) {
        const Endpoint h = hide_head ? Endpoint{d, c} : f.head();
        const Endpoint t = hide_head ? f.tail() : Endpoint{d, c};
        scores.push_back(oracle::triple_product(vec(h), rel(f.predicate()), vec(t)));
      }
      const std::size_t truth = hide_head ? f.fact.head : f.fact.tail;
      const std::size_t expected = oracle::sorted_rank(scores, truth);
      CHECK(result.ranks[q] == expected);
      CHECK(result.ranks[q] <= p.entity_count(d));
      if (expected <= 10) ++hits;
      ++q;
    }
  }
  CHECK(result.hit_at_10 == static_cast<double>(hits) / static_cast<double>(q));
}

TEST_CASE("ranks are invariant to positive rescaling of the relations") {
  const DomainPair p = testing::empty_pair(15, 15, 3, 2);
  EmbeddingModel m = EmbeddingModel::initialize(p, 5, 8);
  TaggedStore test;
  test.insert(fact(Domain::kFirst, 1, 0, Domain::kSecond, 7));
  test.insert(fact(Domain::kSecond, 12, 1, Domain::kFirst, 4));
  test.insert(fact(Domain::kSecond, 2, 1, Domain::kSecond, 9));
  const auto before = hit_at_10(m, test, p).ranks;
  for (PredicateId k = 0; k < 2; ++k) m.relation(k) *= 4.0;
  CHECK(hit_at_10(m, test, p).ranks == before);
}

TEST_CASE("negative sampling for AUC respects the mode") {
  const DomainPair p = testing::empty_pair(5, 8, 1, 3);
  for (auto mode : {AucMode::kIntra, AucMode::kInter}) {
    const auto negs = sample_negatives(p, 2000, mode, 9);
    REQUIRE(negs.size() == 2000);
    std::size_t first_heads = 0;
    for (const auto& t : negs) {
      CHECK(t.is_inter() == (mode == AucMode::kInter));
      CHECK(t.fact.head < p.entity_count(t.head_domain));
      CHECK(t.fact.tail < p.entity_count(t.tail_domain));
      CHECK(t.fact.predicate < 3);
      if (t.head_domain == Domain::kFirst) ++first_heads;
    }
    CHECK(std::abs(static_cast<double>(first_heads) - 1000.0) < 3.0 * std::sqrt(500.0));
    CHECK(sample_negatives(p, 2000, mode, 9) == negs);
  }
}

TEST_CASE("evaluate_test_sets reports four rows in order") {
  PlantedSpec spec;
  spec.truth.entities = 120;
  spec.seed = 4;
  spec.truth.seed = 4;
  const DomainPair p = make_planted_pair(spec);
  const EmbeddingModel m = EmbeddingModel::initialize(p, 6, 1);
  const auto rows = evaluate_test_sets(m, p, 17);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].split == "intra_test");
  CHECK(rows[0].metric == "hit@10");
  CHECK(rows[0].n == 2 * p.intra_test.size());
  CHECK(rows[1].metric == "auc");
  CHECK(rows[1].n == 2 * p.intra_test.size());
  CHECK(rows[1].value == roc_auc(m, p.intra_test, AucMode::kIntra, p, 17).auc);
  CHECK(rows[2].split == "inter_test");
  CHECK(rows[3].value == roc_auc(m, p.inter_test, AucMode::kInter, p, 18).auc);
  for (const auto& r : rows) CHECK((r.value >= 0.0 && r.value <= 1.0));

  testing::TempDir dir;
  write_metrics(rows, dir / "metrics.tsv");
  const auto text = testing::read_file(dir / "metrics.tsv");
  CHECK(text.rfind("intra_test\thit@10\t", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}
