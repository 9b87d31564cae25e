#include "idlp/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>

#include "idlp/text.hpp"

namespace idlp {
namespace {

// Every known fact in any split, for filtered ranking.
TaggedStore all_known_facts(const DomainPair& pair) {
  TaggedStore s;
  for (const auto& t : pair.train1) s.insert(intra(Domain::kFirst, t));
  for (const auto& t : pair.train2) s.insert(intra(Domain::kSecond, t));
  for (const auto* store : {&pair.intra_test, &pair.inter_valid, &pair.inter_test}) {
    for (const auto& t : *store) s.insert(t);
  }
  return s;
}

}  // namespace

RankingResult hit_at_10(const EmbeddingModel& model, const TaggedStore& test, const DomainPair& pair,
                        RankingMode mode) {
  const RowMatrix emb[2] = {model.domain_matrix(Domain::kFirst), model.domain_matrix(Domain::kSecond)};
  TaggedStore known;
  if (mode == RankingMode::kFiltered) known = all_known_facts(pair);

  RankingResult result;
  result.ranks.reserve(2 * test.size());
  std::size_t hits = 0;
  auto rank_query = [&](const TaggedTriplet& fact, bool hide_head) {
    const auto& R = model.relation(fact.predicate());
    const Domain hidden_domain = hide_head ? fact.head_domain : fact.tail_domain;
    const EntityId truth = hide_head ? fact.fact.head : fact.fact.tail;
    const RowMatrix& candidates = emb[index(hidden_domain)];
    // Candidate scores: A_h (R a_t) when hiding the head, A_t (R^T a_h) otherwise.
    const Eigen::VectorXd probe = hide_head ? Eigen::VectorXd(R * model.embedding(fact.tail()).transpose())
                                            : Eigen::VectorXd(R.transpose() * model.embedding(fact.head()).transpose());
    const Eigen::VectorXd scores = candidates * probe;
    const double true_score = scores(truth);
    std::size_t higher = 0;
    for (Eigen::Index c = 0; c < scores.size(); ++c) {
      if (!(scores(c) > true_score)) continue;
      if (mode == RankingMode::kFiltered) {
        TaggedTriplet alt = fact;
        (hide_head ? alt.fact.head : alt.fact.tail) = static_cast<EntityId>(c);
        if (known.contains(alt)) continue;
      }
      ++higher;
    }
    const std::size_t rank = higher + 1;
    result.ranks.push_back(rank);
    if (rank <= 10) ++hits;
  };
  for (const auto& fact : test) {
    rank_query(fact, true);
    rank_query(fact, false);
  }
  result.queries = result.ranks.size();
  result.hit_at_10 = result.queries ? static_cast<double>(hits) / static_cast<double>(result.queries) : 0.0;
  return result;
}

double auc_from_scores(std::span<const double> positives, std::span<const double> negatives) {
  if (positives.empty() || negatives.empty()) throw DataError("AUC needs both positive and negative scores");
  const std::size_t np = positives.size(), nn = negatives.size();
  std::vector<std::pair<double, bool>> all;
  all.reserve(np + nn);
  for (double s : positives) all.emplace_back(s, true);
  for (double s : negatives) all.emplace_back(s, false);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  // Mid-ranks for ties; every value is a multiple of 1/2 so the sum is exact.
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].second) positive_rank_sum += mid_rank;
    }
    i = j;
  }
  const double u = positive_rank_sum - static_cast<double>(np) * static_cast<double>(np + 1) / 2.0;
  return u / (static_cast<double>(np) * static_cast<double>(nn));
}

std::vector<TaggedTriplet> sample_negatives(const DomainPair& pair, std::size_t count, AucMode mode,
                                            std::uint64_t seed) {
  if (pair.predicates.empty() || pair.entities1.empty() || pair.entities2.empty()) {
    throw DataError("cannot sample negatives from an empty pair");
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution first(0.5);
  std::uniform_int_distribution<PredicateId> predicate(0, static_cast<PredicateId>(pair.predicates.size() - 1));
  auto entity = [&](Domain d) {
    std::uniform_int_distribution<EntityId> pick(0, static_cast<EntityId>(pair.entity_count(d) - 1));
    return pick(rng);
  };
  std::vector<TaggedTriplet> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Domain hd = first(rng) ? Domain::kFirst : Domain::kSecond;
    const Domain td = mode == AucMode::kIntra ? hd : other(hd);
    TaggedTriplet t;
    t.head_domain = hd;
    t.tail_domain = td;
    t.fact.head = entity(hd);
    t.fact.predicate = predicate(rng);
    t.fact.tail = entity(td);
    out.push_back(t);
  }
  return out;
}

AucResult roc_auc(const EmbeddingModel& model, const TaggedStore& positives, AucMode mode,
                  const DomainPair& pair, std::uint64_t seed) {
  if (positives.empty()) throw DataError("roc_auc: no positive facts");
  AucResult r;
  r.positive_scores.reserve(positives.size());
  for (const auto& t : positives) r.positive_scores.push_back(score(model, t));
  for (const auto& t : sample_negatives(pair, positives.size(), mode, seed)) {
    r.negative_scores.push_back(score(model, t));
  }
  r.auc = auc_from_scores(r.positive_scores, r.negative_scores);
  return r;
}

std::vector<MetricRow> evaluate_test_sets(const EmbeddingModel& model, const DomainPair& pair,
                                          std::uint64_t seed) {
  std::vector<MetricRow> rows;
  auto add = [&](const char* split, const TaggedStore& store, AucMode mode, std::uint64_t s) {
    if (store.empty()) throw DataError(std::string(split) + " split is empty");
    const auto ranking = hit_at_10(model, store, pair);
    rows.push_back({split, "hit@10", ranking.hit_at_10, ranking.queries});
    const auto auc = roc_auc(model, store, mode, pair, s);
    rows.push_back({split, "auc", auc.auc, auc.positive_scores.size() + auc.negative_scores.size()});
  };
  add("intra_test", pair.intra_test, AucMode::kIntra, seed);
  add("inter_test", pair.inter_test, AucMode::kInter, seed + 1);
  return rows;
}

void write_metrics(const std::vector<MetricRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& r : rows) out << r.split << '\t' << r.metric << '\t' << format_double(r.value) << '\t' << r.n << '\n';
}

}  // namespace idlp
