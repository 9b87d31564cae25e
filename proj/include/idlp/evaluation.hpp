#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "idlp/domain_pair.hpp"
#include "idlp/model.hpp"

namespace idlp {

// Raw ranking scores every candidate. Filtered ranking (not part of the
// standard protocol here) skips candidates that form another known fact.
enum class RankingMode { kRaw, kFiltered };

struct RankingResult {
  std::vector<std::size_t> ranks;  // 1-based; head query then tail query per fact
  double hit_at_10 = 0.0;
  std::size_t queries = 0;
};

// Two queries per fact: hide the head, then hide the tail. Candidates are all
// entities of the hidden entity's own domain, and
//   rank = 1 + #{candidates scoring strictly higher than the true entity}.
// Head and tail queries are pooled into one Hit@10.
RankingResult hit_at_10(const EmbeddingModel& model, const TaggedStore& test, const DomainPair& pair,
                        RankingMode mode = RankingMode::kRaw);

enum class AucMode { kIntra, kInter };

struct AucResult {
  std::vector<double> positive_scores;
  std::vector<double> negative_scores;
  double auc = 0.0;
};

// Mann-Whitney statistic via the rank-sum formula; ties count 1/2.
// Throws DataError if either list is empty.
double auc_from_scores(std::span<const double> positives, std::span<const double> negatives);

// `count` random facts: predicate uniform; for kIntra a domain picked with
// probability 1/2 and both entities uniform inside it, for kInter the head
// domain picked with probability 1/2 and the tail from the other domain.
// Samples colliding with true facts are kept.
std::vector<TaggedTriplet> sample_negatives(const DomainPair& pair, std::size_t count, AucMode mode,
                                            std::uint64_t seed);

// Scores `positives` against as many sampled negatives.
AucResult roc_auc(const EmbeddingModel& model, const TaggedStore& positives, AucMode mode,
                  const DomainPair& pair, std::uint64_t seed);

struct MetricRow {
  std::string split;
  std::string metric;
  double value = 0.0;
  std::size_t n = 0;
};

// Hit@10 and AUC on intra_test and inter_test, in that order.
std::vector<MetricRow> evaluate_test_sets(const EmbeddingModel& model, const DomainPair& pair,
                                          std::uint64_t seed);

// One `split<TAB>metric<TAB>value<TAB>n` line per row.
void write_metrics(const std::vector<MetricRow>& rows, const std::filesystem::path& path);

}  // namespace idlp
