#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idlp/domain_pair.hpp"
#include "idlp/model.hpp"
#include "idlp/negative_sampler.hpp"
#include "idlp/transport.hpp"

namespace idlp {

enum class Regularizer { kNone, kWasserstein, kMmd };
enum class ValidationMetric { kInterAuc, kInterHit10 };

std::string to_string(Regularizer r);           // none | wd | mmd
std::string to_string(ValidationMetric m);      // inter_auc | inter_hit10
Regularizer parse_regularizer(std::string_view s);
ValidationMetric parse_validation_metric(std::string_view s);

struct TrainConfig {
  std::size_t dim = 100;
  double alpha = 0.0;  // weight of the alignment term; ignored for kNone
  Regularizer regularizer = Regularizer::kNone;
  double lambda = 100.0;
  double mu = 0.01;
  double learning_rate = 0.01;
  std::size_t batch_size = 500;
  int epochs = 300;
  int patience = 50;
  int warmstart_epochs = 100;
  std::uint64_t seed = 0;
  ValidationMetric eval_metric = ValidationMetric::kInterAuc;
  int sinkhorn_max_iterations = 1000;
  double sinkhorn_tolerance = 1e-6;
  std::vector<double> kernel_multipliers{0.25, 0.5, 1.0, 2.0, 4.0};

  // Throws ConfigError listing every invalid field.
  void validate() const;
  double effective_alpha() const { return regularizer == Regularizer::kNone ? 0.0 : alpha; }
};

struct EpochStats {
  int epoch = 0;
  double loss1 = 0.0;  // summed hinge over domain-1 positives
  double loss2 = 0.0;
  double reg_value = 0.0;  // <P, C> on full embeddings (wd), full-sample MMD (mmd), else 0
  double val_metric = 0.0;
  int sinkhorn_iterations = 0;
  double seconds = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  int best_epoch = 0;  // 0 when no epoch ran
  double best_metric = 0.0;
  bool stopped_early = false;
};

// One optimization phase over a fixed pair. Owns the random stream for
// shuffling and negative sampling; the alignment terms never draw from it,
// so runs that differ only in alpha see the same batch schedule.
class Trainer {
 public:
  Trainer(const DomainPair& pair, TrainConfig config, std::uint64_t stream_seed);

  // Shuffles train1 + train2 together and takes one SGD step per minibatch:
  // ranking subgradients (one corrupted negative per positive), mu * x for
  // every touched row and predicate, and alpha times the alignment gradient
  // on the entities of the batch's positives. For kWasserstein `plan` must
  // hold the epoch's fixed n1 x n2 plan. Throws NumericalError on a
  // non-finite loss or gradient.
  EpochStats train_epoch(EmbeddingModel& model, const TransportState* plan);

  // Sinkhorn on the current full embeddings with uniform marginals and the
  // cost normalized by its maximum, warm-started from `previous`.
  TransportState refresh_plan(const EmbeddingModel& model, const TransportState* previous) const;

  const TrainConfig& config() const { return config_; }

 private:
  const DomainPair& pair_;
  TrainConfig config_;
  NegativeSampler sampler_;
  std::vector<TaggedTriplet> pool_;
  int epoch_ = 0;
};

// Random streams derived from TrainConfig::seed.
std::uint64_t warmstart_stream(std::uint64_t seed);
std::uint64_t main_stream(std::uint64_t seed);
std::uint64_t validation_stream(std::uint64_t seed);

// Plain ranking training (alpha forced to 0) for config.warmstart_epochs.
EmbeddingModel warmstart(EmbeddingModel model, const DomainPair& pair, const TrainConfig& config);

// config.eval_metric on inter_valid. AUC negatives come from a fixed stream,
// so the same model always gets the same value.
double validation_metric(const EmbeddingModel& model, const DomainPair& pair, const TrainConfig& config);

// Full-sample regularizer value for reporting.
double regularizer_value(const EmbeddingModel& model, const TrainConfig& config,
                         const TransportState* plan);

struct FitResult {
  EmbeddingModel model;  // best checkpoint by validation metric
  TrainReport report;
};

using EpochObserver = std::function<void(const EpochStats&)>;

// Up to config.epochs epochs from `start`; the plan is refreshed after every
// epoch for kWasserstein. Training stops once `patience` consecutive epochs
// fail to improve the best validation value. With zero epochs `start` is
// returned unchanged.
FitResult fit_from(EmbeddingModel start, const DomainPair& pair, const TrainConfig& config,
                   const EpochObserver& observer = {});

// initialize -> warmstart -> fit_from.
FitResult fit(const DomainPair& pair, const TrainConfig& config, const EpochObserver& observer = {});

// `epoch loss1 loss2 reg_value val_metric sinkhorn_iters seconds`
std::string format_log_line(const EpochStats& s);

}  // namespace idlp
