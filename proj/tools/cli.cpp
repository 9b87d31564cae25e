#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "idlp/checkpoint.hpp"
#include "idlp/errors.hpp"
#include "idlp/evaluation.hpp"
#include "idlp/pair_io.hpp"
#include "idlp/projection.hpp"
#include "idlp/sampling.hpp"
#include "idlp/search.hpp"
#include "idlp/synthetic.hpp"
#include "idlp/text.hpp"
#include "idlp/trainer.hpp"

namespace fs = std::filesystem;

namespace idlp::cli {
namespace {

using Entries = std::vector<std::pair<std::string, std::string>>;

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

// Resolved configuration in the format accepted by --config.
void write_config(const fs::path& path, const std::string& section, const Entries& entries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << '[' << section << "]\n";
  for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
}

fs::path default_output_root() {
  const char* env = std::getenv("IDLP_OUTPUT_ROOT");
  return env && *env ? fs::path(env) : fs::path("runs");
}

// Empty `out` means <output root>/<command>.
fs::path resolve_output(const std::string& out, const std::string& command) {
  return fs::absolute(out.empty() ? default_output_root() / command : fs::path(out)).lexically_normal();
}

// Refuses to mix results with an earlier run unless `force` is set, in which
// case the directory is emptied first.
void prepare_output(const fs::path& dir, bool force) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw ConfigError("output path " + dir.string() + " is not a directory");
    if (!fs::is_empty(dir)) {
      if (!force) throw ConfigError("output directory " + dir.string() + " is not empty (pass --force to overwrite)");
      for (const auto& entry : fs::directory_iterator(dir)) fs::remove_all(entry.path());
    }
  }
  fs::create_directories(dir);
}

fs::path existing(const std::string& p, const char* what) {
  if (p.empty()) throw ConfigError(std::string("missing --") + what);
  const fs::path abs = fs::absolute(p).lexically_normal();
  if (!fs::exists(abs)) throw DataError(std::string(what) + " not found: " + abs.string());
  return abs;
}

// Checkpoint and dataset must describe the same entities and predicates.
void check_compatible(const EmbeddingModel& m, const DomainPair& pair) {
  if (m.entity_count(Domain::kFirst) != pair.entities1.size() ||
      m.entity_count(Domain::kSecond) != pair.entities2.size() || m.relation_count() != pair.predicates.size()) {
    throw DataError("checkpoint does not match the dataset's entity or predicate counts");
  }
  for (const auto& c : pair.common) {
    if (m.slot({Domain::kFirst, c.first}) != m.slot({Domain::kSecond, c.second})) {
      throw DataError("checkpoint does not tie the dataset's common entities");
    }
  }
}

void print_metrics(const std::vector<MetricRow>& rows, std::ostream& out) {
  for (const auto& r : rows) out << r.split << '\t' << r.metric << '\t' << format_double(r.value) << '\t' << r.n << '\n';
}

// Options shared by train and tune.
struct TrainArgs {
  std::string data;
  std::string out;
  bool force = false;
  TrainConfig config;
  std::string regularizer = "none";
  std::string eval_metric = "inter_auc";
  bool dump_plan = false;

  void add_to(CLI::App* app) {
    app->add_option("--data", data, "dataset directory written by `sample`")->required();
    app->add_option("--out", out, "output directory (default: $IDLP_OUTPUT_ROOT/<command>)");
    app->add_flag("--force", force, "overwrite a non-empty output directory");
    app->add_option("--dim", config.dim, "embedding dimension")->capture_default_str();
    app->add_option("--alpha", config.alpha, "regularizer weight")->capture_default_str();
    app->add_option("--regularizer", regularizer, "none | wd | mmd")->capture_default_str();
    app->add_option("--lambda", config.lambda, "Sinkhorn inverse temperature")->capture_default_str();
    app->add_option("--mu", config.mu, "weight decay on touched parameters")->capture_default_str();
    app->add_option("--lr", config.learning_rate, "SGD learning rate")->capture_default_str();
    app->add_option("--batch-size", config.batch_size)->capture_default_str();
    app->add_option("--epochs", config.epochs)->capture_default_str();
    app->add_option("--patience", config.patience)->capture_default_str();
    app->add_option("--warmstart-epochs", config.warmstart_epochs)->capture_default_str();
    app->add_option("--seed", config.seed)->capture_default_str();
    app->add_option("--eval-metric", eval_metric, "inter_auc | inter_hit10")->capture_default_str();
    app->add_option("--sinkhorn-max-iterations", config.sinkhorn_max_iterations)->capture_default_str();
    app->add_option("--sinkhorn-tolerance", config.sinkhorn_tolerance)->capture_default_str();
    app->add_option("--kernel-multipliers", config.kernel_multipliers, "MMD bandwidth multipliers")
        ->delimiter(',')
        ->capture_default_str();
  }

  // Collects every problem before reporting.
  void finalize() {
    std::vector<std::string> problems;
    try {
      config.regularizer = parse_regularizer(regularizer);
    } catch (const ConfigError& e) {
      problems.push_back(e.what());
    }
    try {
      config.eval_metric = parse_validation_metric(eval_metric);
    } catch (const ConfigError& e) {
      problems.push_back(e.what());
    }
    try {
      config.validate();
    } catch (const ConfigError& e) {
      problems.push_back(e.what());
    }
    if (problems.empty()) return;
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "\n") + p;
    throw ConfigError(msg);
  }
};

Entries train_entries(const fs::path& data, const fs::path& out, const TrainConfig& c) {
  return {{"data", data.string()},
          {"out", out.string()},
          {"dim", std::to_string(c.dim)},
          {"alpha", format_double(c.alpha)},
          {"regularizer", to_string(c.regularizer)},
          {"lambda", format_double(c.lambda)},
          {"mu", format_double(c.mu)},
          {"lr", format_double(c.learning_rate)},
          {"batch-size", std::to_string(c.batch_size)},
          {"epochs", std::to_string(c.epochs)},
          {"patience", std::to_string(c.patience)},
          {"warmstart-epochs", std::to_string(c.warmstart_epochs)},
          {"seed", std::to_string(c.seed)},
          {"eval-metric", to_string(c.eval_metric)},
          {"sinkhorn-max-iterations", std::to_string(c.sinkhorn_max_iterations)},
          {"sinkhorn-tolerance", format_double(c.sinkhorn_tolerance)},
          {"kernel-multipliers", join(c.kernel_multipliers)}};
}

struct SampleArgs {
  std::string input;
  std::string out;
  bool force = false;
  bool planted = false;
  std::size_t size = 2700;
  double overlap = 0.03;
  std::uint64_t seed = 0;
  PlantedSpec planted_spec;
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  const fs::path dir = resolve_output(a.out, "sample");
  DomainPair pair;
  Entries echo;
  if (a.planted) {
    if (!a.input.empty()) throw ConfigError("--input and --planted are mutually exclusive");
    PlantedSpec spec = a.planted_spec;
    spec.overlap = a.overlap;
    spec.seed = a.seed;
    if (!(spec.overlap >= 0.0 && spec.overlap < 1.0)) throw ConfigError("--overlap must lie in [0, 1)");
    if (!(spec.dropout >= 0.0 && spec.dropout < 1.0)) throw ConfigError("--dropout must lie in [0, 1)");
    prepare_output(dir, a.force);
    pair = make_planted_pair(spec);
    echo = {{"planted", "true"},
            {"out", dir.string()},
            {"overlap", format_double(spec.overlap)},
            {"seed", std::to_string(spec.seed)},
            {"entities", std::to_string(spec.truth.entities)},
            {"predicates", std::to_string(spec.truth.predicates)},
            {"clusters", std::to_string(spec.truth.clusters)},
            {"degree", format_double(spec.truth.mean_out_degree)},
            {"noise", format_double(spec.truth.noise)},
            {"graph-seed", std::to_string(spec.truth.seed)},
            {"dropout", format_double(spec.dropout)}};
  } else {
    const fs::path input = existing(a.input, "input");
    OverlapSpec spec{a.overlap, a.size, a.seed};
    const Graph source = load_triplets(input);
    prepare_output(dir, a.force);
    pair = sample_domain_pair(source, spec);
    echo = {{"input", input.string()},
            {"out", dir.string()},
            {"size", std::to_string(a.size)},
            {"overlap", format_double(a.overlap)},
            {"seed", std::to_string(a.seed)}};
  }
  save_domain_pair(pair, dir);
  write_config(dir / "config.ini", "sample", echo);
  out << "entities1=" << pair.entities1.size() << " entities2=" << pair.entities2.size()
      << " common=" << pair.common.size() << " predicates=" << pair.predicates.size()
      << " train1=" << pair.train1.size() << " train2=" << pair.train2.size()
      << " intra_test=" << pair.intra_test.size() << " inter_valid=" << pair.inter_valid.size()
      << " inter_test=" << pair.inter_test.size() << '\n';
  return kOk;
}

int cmd_train(TrainArgs& a, std::ostream& out) {
  a.finalize();
  const fs::path data = existing(a.data, "data");
  const fs::path dir = resolve_output(a.out, "train");
  const DomainPair pair = load_domain_pair(data);
  prepare_output(dir, a.force);
  write_config(dir / "config.ini", "train", train_entries(data, dir, a.config));

  std::ofstream log(dir / "train.log", std::ios::binary | std::ios::trunc);
  if (!log) throw DataError("cannot write " + (dir / "train.log").string());
  const FitResult result = fit(pair, a.config, [&](const EpochStats& s) { log << format_log_line(s) << '\n' << std::flush; });

  save_checkpoint(result.model, dir / "model.ckpt");
  const auto rows = evaluate_test_sets(result.model, pair, a.config.seed);
  write_metrics(rows, dir / "metrics.tsv");
  if (a.dump_plan && a.config.regularizer == Regularizer::kWasserstein) {
    const Trainer trainer(pair, a.config, 0);
    write_plan_tsv(trainer.refresh_plan(result.model, nullptr), pair.entities1, pair.entities2, dir / "plan.tsv");
  }
  out << "best_epoch=" << result.report.best_epoch << " best_valid=" << format_double(result.report.best_metric)
      << " epochs_run=" << result.report.epochs.size() << " stopped_early=" << (result.report.stopped_early ? 1 : 0)
      << '\n';
  print_metrics(rows, out);
  return kOk;
}

struct TuneArgs {
  TrainArgs base;
  std::size_t budget = 20;
  std::uint64_t search_seed = 0;
  SearchSpace space;
};

int cmd_tune(TuneArgs& a, std::ostream& out) {
  a.base.finalize();
  const fs::path data = existing(a.base.data, "data");
  const fs::path dir = resolve_output(a.base.out, "tune");
  const DomainPair pair = load_domain_pair(data);
  if (a.base.config.regularizer == Regularizer::kNone) a.space.tune_alpha = false;
  if (a.space.tune_alpha && !(a.space.alpha_min > 0.0 && a.space.alpha_min <= a.space.alpha_max)) {
    throw ConfigError("alpha range must satisfy 0 < alpha-min <= alpha-max");
  }
  prepare_output(dir, a.base.force);

  auto config_for = [&](const TrialParams& p) {
    TrainConfig c = a.base.config;
    c.alpha = p.alpha;
    c.learning_rate = p.learning_rate;
    c.batch_size = p.batch_size;
    return c;
  };
  std::ofstream trials(dir / "trials.tsv", std::ios::binary | std::ios::trunc);
  if (!trials) throw DataError("cannot write " + (dir / "trials.tsv").string());
  trials << "trial\talpha\tlr\tbatch_size\tbest_epoch\tvalid\n";
  std::size_t index = 0;
  const SearchResult result = random_search(a.space, a.budget, a.search_seed, [&](const TrialParams& p) {
    const FitResult r = fit(pair, config_for(p));
    trials << index++ << '\t' << format_double(p.alpha) << '\t' << format_double(p.learning_rate) << '\t'
           << p.batch_size << '\t' << r.report.best_epoch << '\t' << format_double(r.report.best_metric) << '\n'
           << std::flush;
    return r.report.best_metric;
  });
  const Trial& best = result.trials[result.best];
  const TrainConfig best_config = config_for(best.params);
  Entries best_entries = train_entries(data, dir, best_config);
  best_entries.erase(best_entries.begin() + 1);  // the output directory is chosen at train time
  write_config(dir / "best_config.ini", "train", best_entries);
  Entries echo = train_entries(data, dir, a.base.config);
  echo.erase(std::remove_if(echo.begin(), echo.end(),
                            [](const auto& e) { return e.first == "alpha" || e.first == "lr" || e.first == "batch-size"; }),
             echo.end());
  echo.push_back({"budget", std::to_string(a.budget)});
  echo.push_back({"search-seed", std::to_string(a.search_seed)});
  echo.push_back({"alpha-min", format_double(a.space.alpha_min)});
  echo.push_back({"alpha-max", format_double(a.space.alpha_max)});
  write_config(dir / "config.ini", "tune", echo);
  out << "best_trial=" << best.index << " alpha=" << format_double(best.params.alpha)
      << " lr=" << format_double(best.params.learning_rate) << " batch_size=" << best.params.batch_size
      << " valid=" << format_double(best.score) << '\n';
  return kOk;
}

struct ModelArgs {
  std::string data;
  std::string checkpoint;
  std::string out;
  bool force = false;
  std::uint64_t seed = 0;
};

int cmd_eval(const ModelArgs& a, std::ostream& out) {
  const fs::path data = existing(a.data, "data");
  const fs::path ckpt = existing(a.checkpoint, "checkpoint");
  const fs::path dir = resolve_output(a.out, "eval");
  const DomainPair pair = load_domain_pair(data);
  const EmbeddingModel model = load_checkpoint(ckpt);
  check_compatible(model, pair);
  prepare_output(dir, a.force);
  const auto rows = evaluate_test_sets(model, pair, a.seed);
  write_metrics(rows, dir / "metrics.tsv");
  write_config(dir / "config.ini", "eval",
               {{"data", data.string()}, {"checkpoint", ckpt.string()}, {"out", dir.string()},
                {"seed", std::to_string(a.seed)}});
  print_metrics(rows, out);
  return kOk;
}

int cmd_export(const ModelArgs& a, std::ostream& out) {
  const fs::path data = existing(a.data, "data");
  const fs::path ckpt = existing(a.checkpoint, "checkpoint");
  const fs::path dir = resolve_output(a.out, "export");
  const DomainPair pair = load_domain_pair(data);
  const EmbeddingModel model = load_checkpoint(ckpt);
  check_compatible(model, pair);
  prepare_output(dir, a.force);

  std::vector<bool> common[2] = {std::vector<bool>(pair.entities1.size()), std::vector<bool>(pair.entities2.size())};
  for (const auto& c : pair.common) {
    common[0][c.first] = true;
    common[1][c.second] = true;
  }
  RowMatrix pooled(static_cast<Eigen::Index>(pair.entities1.size() + pair.entities2.size()),
                   static_cast<Eigen::Index>(model.dim()));
  pooled << model.domain_matrix(Domain::kFirst), model.domain_matrix(Domain::kSecond);
  const Projection proj = principal_components_2d(pooled);

  std::ofstream emb(dir / "embeddings.tsv", std::ios::binary | std::ios::trunc);
  std::ofstream prj(dir / "projection.tsv", std::ios::binary | std::ios::trunc);
  if (!emb || !prj) throw DataError("cannot write export files in " + dir.string());
  emb << "domain\tid\tname\tcommon";
  for (std::size_t k = 0; k < model.dim(); ++k) emb << "\tv" << k;
  emb << '\n';
  prj << "domain\tid\tname\tcommon\tpc1\tpc2\n";
  Eigen::Index row = 0;
  for (Domain d : {Domain::kFirst, Domain::kSecond}) {
    for (EntityId id = 0; id < pair.entity_count(d); ++id, ++row) {
      const std::string prefix = std::to_string(tag(d)) + '\t' + std::to_string(id) + '\t' + pair.entities(d).name(id) +
                                 '\t' + (common[index(d)][id] ? "1" : "0");
      emb << prefix;
      for (Eigen::Index k = 0; k < pooled.cols(); ++k) emb << '\t' << format_double17(pooled(row, k));
      emb << '\n';
      prj << prefix << '\t' << format_double17(proj.coords(row, 0)) << '\t' << format_double17(proj.coords(row, 1))
          << '\n';
    }
  }
  write_config(dir / "config.ini", "export",
               {{"data", data.string()}, {"checkpoint", ckpt.string()}, {"out", dir.string()}});
  out << "rows=" << pooled.rows() << " variance_pc1=" << format_double(proj.variances(0))
      << " variance_pc2=" << format_double(proj.variances(1)) << '\n';
  return kOk;
}

// CLI11 reads --config on the top-level app only; accept it after the
// subcommand too.
std::vector<std::string> hoist_config(std::vector<std::string> args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string value;
    std::size_t span = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      value = args[i + 1];
      span = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      value = args[i].substr(9);
      span = 1;
    } else {
      continue;
    }
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + span));
    args.insert(args.begin(), {"--config", value});
    break;
  }
  return args;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inter-domain link prediction with aligned RESCAL embeddings", "idlp"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file; keys go under a [<command>] section, flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);

  SampleArgs sample;
  auto* s = app.add_subcommand("sample", "draw a two-domain dataset");
  s->add_option("--input", sample.input, "tab-separated head/predicate/tail file");
  s->add_option("--out", sample.out, "dataset directory (default: $IDLP_OUTPUT_ROOT/sample)");
  s->add_flag("--force", sample.force);
  s->add_option("--size", sample.size, "entities per domain")->capture_default_str();
  s->add_option("--overlap", sample.overlap, "shared fraction of each domain")->capture_default_str();
  s->add_option("--seed", sample.seed)->capture_default_str();
  s->add_flag("--planted", sample.planted, "generate a synthetic pair with planted correspondence instead");
  s->add_option("--entities", sample.planted_spec.truth.entities)->capture_default_str();
  s->add_option("--predicates", sample.planted_spec.truth.predicates)->capture_default_str();
  s->add_option("--clusters", sample.planted_spec.truth.clusters)->capture_default_str();
  s->add_option("--degree", sample.planted_spec.truth.mean_out_degree)->capture_default_str();
  s->add_option("--noise", sample.planted_spec.truth.noise)->capture_default_str();
  s->add_option("--graph-seed", sample.planted_spec.truth.seed)->capture_default_str();
  s->add_option("--dropout", sample.planted_spec.dropout)->capture_default_str();

  TrainArgs train;
  auto* t = app.add_subcommand("train", "fit a model and evaluate the best checkpoint");
  train.add_to(t);
  t->add_flag("--dump-plan", train.dump_plan, "write the final transport plan (wd only)");

  TuneArgs tune;
  auto* u = app.add_subcommand("tune", "random search over alpha, lr and batch size");
  tune.base.add_to(u);
  u->add_option("--budget", tune.budget, "number of trials")->capture_default_str();
  u->add_option("--search-seed", tune.search_seed)->capture_default_str();
  u->add_option("--alpha-min", tune.space.alpha_min)->capture_default_str();
  u->add_option("--alpha-max", tune.space.alpha_max)->capture_default_str();

  ModelArgs eval;
  auto* e = app.add_subcommand("eval", "Hit@10 and AUC of a checkpoint on the test splits");
  ModelArgs exp;
  auto* x = app.add_subcommand("export", "embeddings and a 2-D principal-component projection");
  for (auto [cmd, args] : {std::pair{e, &eval}, std::pair{x, &exp}}) {
    cmd->add_option("--data", args->data)->required();
    cmd->add_option("--checkpoint", args->checkpoint)->required();
    cmd->add_option("--out", args->out);
    cmd->add_flag("--force", args->force);
  }
  e->add_option("--seed", eval.seed, "seed for AUC negatives")->capture_default_str();

  std::vector<std::string> args = hoist_config(raw_args);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex, out, err) == 0 ? kOk : kConfigError;
  }

  try {
    if (*s) return cmd_sample(sample, out);
    if (*t) return cmd_train(train, out);
    if (*u) return cmd_tune(tune, out);
    if (*e) return cmd_eval(eval, out);
    if (*x) return cmd_export(exp, out);
  } catch (const ConfigError& ex) {
    err << "config error: " << ex.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& ex) {
    err << "numerical error: " << ex.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& ex) {
    err << "data error: " << ex.what() << '\n';
    return kDataError;
  }
  return kConfigError;
}

}  // namespace idlp::cli
