#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace idlp {

// Hyperparameter ranges for random search.
struct SearchSpace {
  double alpha_min = 0.5;
  double alpha_max = 10.0;
  bool tune_alpha = true;  // false pins alpha to 0 (baseline tuning)
  std::vector<double> learning_rates{0.01, 0.005, 0.001, 0.0005};
  std::vector<std::size_t> batch_sizes{100, 300, 500, 700};
};

struct TrialParams {
  double alpha = 0.0;
  double learning_rate = 0.0;
  std::size_t batch_size = 0;
};

struct Trial {
  std::size_t index = 0;
  TrialParams params;
  double score = 0.0;
};

struct SearchResult {
  std::vector<Trial> trials;
  std::size_t best = 0;  // index into trials; earliest wins ties
};

// alpha ~ Uniform[alpha_min, alpha_max], lr and batch size uniform over
// their lists.
TrialParams sample_trial(const SearchSpace& space, std::mt19937_64& rng);

// Samples `budget` trials up front from `seed`, evaluates them in order and
// returns the one with the highest objective. Throws ConfigError for an
// empty budget or space.
SearchResult random_search(const SearchSpace& space, std::size_t budget, std::uint64_t seed,
                           const std::function<double(const TrialParams&)>& objective);

}  // namespace idlp
