#include "idlp/search.hpp"

#include "idlp/errors.hpp"

namespace idlp {

TrialParams sample_trial(const SearchSpace& space, std::mt19937_64& rng) {
  TrialParams p;
  std::uniform_real_distribution<double> alpha(space.alpha_min, space.alpha_max);
  std::uniform_int_distribution<std::size_t> lr(0, space.learning_rates.size() - 1);
  std::uniform_int_distribution<std::size_t> batch(0, space.batch_sizes.size() - 1);
  const double a = alpha(rng);
  p.alpha = space.tune_alpha ? a : 0.0;
  p.learning_rate = space.learning_rates[lr(rng)];
  p.batch_size = space.batch_sizes[batch(rng)];
  return p;
}

SearchResult random_search(const SearchSpace& space, std::size_t budget, std::uint64_t seed,
                           const std::function<double(const TrialParams&)>& objective) {
  if (budget < 1) throw ConfigError("search budget must be at least 1");
  if (space.learning_rates.empty() || space.batch_sizes.empty() || !(space.alpha_min <= space.alpha_max)) {
    throw ConfigError("search space is empty");
  }
  std::mt19937_64 rng(seed);
  SearchResult result;
  for (std::size_t i = 0; i < budget; ++i) result.trials.push_back({i, sample_trial(space, rng), 0.0});
  for (auto& t : result.trials) {
    t.score = objective(t.params);
    if (t.score > result.trials[result.best].score) result.best = t.index;
  }
  return result;
}

}  // namespace idlp
