#include "idlp/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "idlp/evaluation.hpp"
#include "idlp/gradients.hpp"
#include "idlp/mmd.hpp"
#include "idlp/text.hpp"

namespace idlp {
namespace {

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void check_tying(const EmbeddingModel& model, const DomainPair& pair) {
  for (const auto& c : pair.common) {
    if (model.slot({Domain::kFirst, c.first}) != model.slot({Domain::kSecond, c.second})) {
      throw NumericalError("common entity lost its shared embedding slot");
    }
  }
}

std::string describe(const DomainPair& pair, const TaggedTriplet& t) {
  return pair.entities(t.head_domain).name(t.fact.head) + " " + pair.predicates.name(t.predicate()) + " " +
         pair.entities(t.tail_domain).name(t.fact.tail);
}

}  // namespace

std::string to_string(Regularizer r) {
  switch (r) {
    case Regularizer::kNone: return "none";
    case Regularizer::kWasserstein: return "wd";
    case Regularizer::kMmd: return "mmd";
  }
  return "none";
}

std::string to_string(ValidationMetric m) {
  return m == ValidationMetric::kInterAuc ? "inter_auc" : "inter_hit10";
}

Regularizer parse_regularizer(std::string_view s) {
  if (s == "none") return Regularizer::kNone;
  if (s == "wd") return Regularizer::kWasserstein;
  if (s == "mmd") return Regularizer::kMmd;
  throw ConfigError("unknown regularizer '" + std::string(s) + "' (expected none, wd or mmd)");
}

ValidationMetric parse_validation_metric(std::string_view s) {
  if (s == "inter_auc") return ValidationMetric::kInterAuc;
  if (s == "inter_hit10") return ValidationMetric::kInterHit10;
  throw ConfigError("unknown eval metric '" + std::string(s) + "' (expected inter_auc or inter_hit10)");
}

void TrainConfig::validate() const {
  std::vector<std::string> problems;
  if (dim < 1) problems.push_back("dim must be at least 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) problems.push_back("alpha must be finite and >= 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) problems.push_back("lambda must be finite and > 0");
  if (!(mu >= 0.0) || !std::isfinite(mu)) problems.push_back("mu must be finite and >= 0");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) problems.push_back("lr must be finite and >= 0");
  if (batch_size < 1) problems.push_back("batch_size must be at least 1");
  if (epochs < 0) problems.push_back("epochs must be >= 0");
  if (patience < 0) problems.push_back("patience must be >= 0");
  if (warmstart_epochs < 0) problems.push_back("warmstart_epochs must be >= 0");
  if (sinkhorn_max_iterations < 1) problems.push_back("sinkhorn_max_iterations must be >= 1");
  if (!(sinkhorn_tolerance > 0.0)) problems.push_back("sinkhorn_tolerance must be > 0");
  if (kernel_multipliers.empty()) problems.push_back("kernel_multipliers must not be empty");
  for (double m : kernel_multipliers) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      problems.push_back("kernel_multipliers must be positive");
      break;
    }
  }
  if (problems.empty()) return;
  std::string msg = "invalid training configuration:";
  for (const auto& p : problems) msg += "\n  - " + p;
  throw ConfigError(msg);
}

std::uint64_t warmstart_stream(std::uint64_t seed) { return seed * 0x9E3779B97F4A7C15ULL + 0x57A8; }
std::uint64_t main_stream(std::uint64_t seed) { return seed * 0x9E3779B97F4A7C15ULL + 0x3A1F; }
std::uint64_t validation_stream(std::uint64_t seed) { return seed * 0x9E3779B97F4A7C15ULL + 0x7E11; }

Trainer::Trainer(const DomainPair& pair, TrainConfig config, std::uint64_t stream_seed)
    : pair_(pair),
      config_(std::move(config)),
      sampler_(pair.entities1.size(), pair.entities2.size(), stream_seed) {
  config_.validate();
  pool_.reserve(pair.train1.size() + pair.train2.size());
  for (const auto& t : pair.train1) pool_.push_back(intra(Domain::kFirst, t));
  for (const auto& t : pair.train2) pool_.push_back(intra(Domain::kSecond, t));
}

EpochStats Trainer::train_epoch(EmbeddingModel& model, const TransportState* plan) {
  const double alpha = config_.effective_alpha();
  const auto n1 = static_cast<Eigen::Index>(pair_.entities1.size());
  const auto n2 = static_cast<Eigen::Index>(pair_.entities2.size());
  if (config_.regularizer == Regularizer::kWasserstein && alpha > 0.0 &&
      (!plan || plan->plan.rows() != n1 || plan->plan.cols() != n2)) {
    throw ConfigError("wd training needs an n1 x n2 transport plan");
  }

  ++epoch_;
  EpochStats stats;
  stats.epoch = epoch_;

  // Kernel scale is frozen for the whole epoch.
  KernelMixture kernel;
  if (config_.regularizer == Regularizer::kMmd && alpha > 0.0) {
    kernel.multipliers = config_.kernel_multipliers;
    kernel.base_scale =
        base_scale(model.domain_matrix(Domain::kFirst), model.domain_matrix(Domain::kSecond)).value;
  }

  std::shuffle(pool_.begin(), pool_.end(), sampler_.engine());

  std::vector<std::size_t> touched_slots;
  std::vector<PredicateId> touched_relations;
  std::vector<EntityId> batch_entities[2];
  for (std::size_t start = 0; start < pool_.size(); start += config_.batch_size) {
    const std::size_t stop = std::min(pool_.size(), start + config_.batch_size);
    SparseGradient grad(model.dim());
    touched_slots.clear();
    touched_relations.clear();
    batch_entities[0].clear();
    batch_entities[1].clear();

    for (std::size_t i = start; i < stop; ++i) {
      const TaggedTriplet& pos = pool_[i];
      const TaggedTriplet neg = sampler_.corrupt(pos);
      const double loss = accumulate_ranking_gradient(model, pos, neg, grad);
      if (!std::isfinite(loss)) {
        throw NumericalError("non-finite ranking loss in epoch " + std::to_string(epoch_) + ", batch starting at " +
                             std::to_string(start) + ": positive (" + describe(pair_, pos) + "), negative (" +
                             describe(pair_, neg) + ")");
      }
      (pos.head_domain == Domain::kFirst ? stats.loss1 : stats.loss2) += loss;
      for (const Endpoint e : {pos.head(), pos.tail(), neg.head(), neg.tail()}) {
        touched_slots.push_back(model.slot(e));
      }
      touched_relations.push_back(pos.predicate());
      batch_entities[index(pos.head_domain)].push_back(pos.fact.head);
      batch_entities[index(pos.tail_domain)].push_back(pos.fact.tail);
    }
    sort_unique(touched_slots);
    sort_unique(touched_relations);
    accumulate_frobenius_gradient(model, config_.mu, touched_slots, touched_relations, grad);

    if (alpha > 0.0) {
      sort_unique(batch_entities[0]);
      sort_unique(batch_entities[1]);
      auto add_rows = [&](Domain d, const std::vector<EntityId>& ids, const RowMatrix& g) {
        for (std::size_t r = 0; r < ids.size(); ++r) {
          grad.row(model.slot({d, ids[r]})) += alpha * g.row(static_cast<Eigen::Index>(r)).transpose();
        }
      };
      if (config_.regularizer == Regularizer::kWasserstein) {
        const RowMatrix a1 = model.domain_matrix(Domain::kFirst);
        const RowMatrix a2 = model.domain_matrix(Domain::kSecond);
        const auto g = ot_embedding_gradient(plan->plan, a1, a2, batch_entities[0], batch_entities[1]);
        add_rows(Domain::kFirst, batch_entities[0], g.first);
        add_rows(Domain::kSecond, batch_entities[1], g.second);
      } else if (config_.regularizer == Regularizer::kMmd && batch_entities[0].size() >= 2 &&
                 batch_entities[1].size() >= 2) {
        RowMatrix b[2];
        std::vector<Eigen::Index> rows[2];
        for (std::size_t k = 0; k < 2; ++k) {
          const Domain d = k == 0 ? Domain::kFirst : Domain::kSecond;
          b[k].resize(static_cast<Eigen::Index>(batch_entities[k].size()), static_cast<Eigen::Index>(model.dim()));
          for (std::size_t r = 0; r < batch_entities[k].size(); ++r) {
            b[k].row(static_cast<Eigen::Index>(r)) = model.embedding({d, batch_entities[k][r]});
            rows[k].push_back(static_cast<Eigen::Index>(r));
          }
        }
        const auto g = mmd_gradient(b[0], b[1], kernel, rows[0], rows[1]);
        add_rows(Domain::kFirst, batch_entities[0], g.first);
        add_rows(Domain::kSecond, batch_entities[1], g.second);
      }
    }

    if (!grad.all_finite()) {
      throw NumericalError("non-finite gradient in epoch " + std::to_string(epoch_) + ", batch starting at " +
                           std::to_string(start) + " (first positive: " + describe(pair_, pool_[start]) + ")");
    }
    grad.apply(model, config_.learning_rate);
  }
  return stats;
}

TransportState Trainer::refresh_plan(const EmbeddingModel& model, const TransportState* previous) const {
  SinkhornOptions opts;
  opts.lambda = config_.lambda;
  opts.max_iterations = config_.sinkhorn_max_iterations;
  opts.tolerance = config_.sinkhorn_tolerance;
  opts.normalize_cost = true;
  return sinkhorn(uniform_marginal(pair_.entities1.size()), uniform_marginal(pair_.entities2.size()),
                  cost_matrix(model.domain_matrix(Domain::kFirst), model.domain_matrix(Domain::kSecond)), opts,
                  previous);
}

EmbeddingModel warmstart(EmbeddingModel model, const DomainPair& pair, const TrainConfig& config) {
  TrainConfig plain = config;
  plain.regularizer = Regularizer::kNone;
  plain.alpha = 0.0;
  Trainer trainer(pair, plain, warmstart_stream(config.seed));
  for (int e = 0; e < config.warmstart_epochs; ++e) trainer.train_epoch(model, nullptr);
  return model;
}

double validation_metric(const EmbeddingModel& model, const DomainPair& pair, const TrainConfig& config) {
  if (pair.inter_valid.empty()) throw DataError("inter_valid split is empty");
  if (config.eval_metric == ValidationMetric::kInterHit10) return hit_at_10(model, pair.inter_valid, pair).hit_at_10;
  return roc_auc(model, pair.inter_valid, AucMode::kInter, pair, validation_stream(config.seed)).auc;
}

double regularizer_value(const EmbeddingModel& model, const TrainConfig& config, const TransportState* plan) {
  switch (config.regularizer) {
    case Regularizer::kWasserstein:
      if (!plan) return 0.0;
      return transport_cost(plan->plan,
                            cost_matrix(model.domain_matrix(Domain::kFirst), model.domain_matrix(Domain::kSecond)));
    case Regularizer::kMmd: {
      const RowMatrix a1 = model.domain_matrix(Domain::kFirst);
      const RowMatrix a2 = model.domain_matrix(Domain::kSecond);
      if (a1.rows() < 2 || a2.rows() < 2) return 0.0;
      KernelMixture kernel;
      kernel.multipliers = config.kernel_multipliers;
      kernel.base_scale = base_scale(a1, a2).value;
      return mmd_unbiased(a1, a2, kernel);
    }
    case Regularizer::kNone:
      break;
  }
  return 0.0;
}

FitResult fit_from(EmbeddingModel start, const DomainPair& pair, const TrainConfig& config,
                   const EpochObserver& observer) {
  config.validate();
  check_tying(start, pair);
  FitResult result{start, {}};
  if (config.epochs == 0) return result;

  Trainer trainer(pair, config, main_stream(config.seed));
  EmbeddingModel model = std::move(start);
  std::optional<TransportState> plan;
  if (config.regularizer == Regularizer::kWasserstein) plan = trainer.refresh_plan(model, nullptr);

  double best = -std::numeric_limits<double>::infinity();
  int since_improvement = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    EpochStats stats = trainer.train_epoch(model, plan ? &*plan : nullptr);
    check_tying(model, pair);
    if (plan) {
      plan = trainer.refresh_plan(model, &*plan);
      stats.reg_value = transport_cost(*plan);
      stats.sinkhorn_iterations = plan->iterations;
    } else {
      stats.reg_value = regularizer_value(model, config, nullptr);
    }
    stats.val_metric = validation_metric(model, pair, config);
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.report.epochs.push_back(stats);
    if (observer) observer(stats);

    if (stats.val_metric > best) {
      best = stats.val_metric;
      result.model = model;
      result.report.best_epoch = epoch;
      result.report.best_metric = best;
      since_improvement = 0;
    } else if (++since_improvement >= config.patience) {
      result.report.stopped_early = epoch < config.epochs;
      break;
    }
  }
  return result;
}

FitResult fit(const DomainPair& pair, const TrainConfig& config, const EpochObserver& observer) {
  config.validate();
  EmbeddingModel model = EmbeddingModel::initialize(pair, config.dim, config.seed);
  model = warmstart(std::move(model), pair, config);
  return fit_from(std::move(model), pair, config, observer);
}

std::string format_log_line(const EpochStats& s) {
  std::ostringstream out;
  out << s.epoch << ' ' << format_double(s.loss1) << ' ' << format_double(s.loss2) << ' '
      << format_double(s.reg_value) << ' ' << format_double(s.val_metric) << ' ' << s.sinkhorn_iterations << ' '
      << format_double(std::round(s.seconds * 1000.0) / 1000.0);
  return out.str();
}

}  // namespace idlp
