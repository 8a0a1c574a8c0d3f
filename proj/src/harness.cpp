#include "rays/harness.hpp"

#include "rays/dataset.hpp"
#include "rays/search.hpp"

#include "io_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace rays {

const char* to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::naive: return "naive";
    case Algorithm::hierarchical: return "hierarchical";
    case Algorithm::random_baseline: return "random-baseline";
  }
  return "unknown";
}

const char* to_string(RunMode mode) { return mode == RunMode::early_stop ? "early-stop" : "full-budget"; }

Algorithm parse_algorithm(const std::string& name) {
  for (auto a : {Algorithm::naive, Algorithm::hierarchical, Algorithm::random_baseline}) {
    if (name == to_string(a)) return a;
  }
  throw ConfigError("unknown algorithm '" + name + "' (naive, hierarchical, random-baseline)");
}

RunMode parse_mode(const std::string& name) {
  if (name == "early-stop") return RunMode::early_stop;
  if (name == "full-budget") return RunMode::full_budget;
  throw ConfigError("unknown mode '" + name + "' (early-stop, full-budget)");
}

void validate(const RunConfig& c) {
  if (!(c.epsilon > 0 && c.epsilon <= 1)) throw ConfigError("epsilon must lie in (0,1]");
  if (!(c.tol > 0 && c.tol < c.epsilon)) throw ConfigError("tol must be positive and below epsilon");
  if (c.budget < 1) throw ConfigError("budget must be >= 1");
  if (c.parallelism < 1) throw ConfigError("parallelism must be >= 1");
}

std::uint64_t example_seed(std::uint64_t seed, std::int64_t index) {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

AttackResult<double> attack_one(const ClassifierModel& model, const Example<double>& x, std::int64_t index,
                                const RunConfig& config) {
  HardLabelOracle<double> oracle(model);
  StoppingRule stop;
  stop.budget = config.budget;
  if (config.mode == RunMode::early_stop) stop.early_stop = config.epsilon;
  switch (config.algo) {
    case Algorithm::naive: return rays_naive(oracle, x, config.tol, stop);
    case Algorithm::hierarchical: return rays_hierarchical(oracle, x, config.tol, stop);
    case Algorithm::random_baseline:
      return random_vertex_baseline(oracle, x, config.tol, stop, example_seed(config.seed, index));
  }
  throw ConfigError("unknown algorithm");
}

void check_compatible(const ClassifierModel& model, std::span<const Example<double>> examples) {
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (examples[i].dim() != model.input_dim()) {
      throw DimensionMismatch("example " + std::to_string(i) + " has dim " + std::to_string(examples[i].dim()) +
                              ", model expects " + std::to_string(model.input_dim()));
    }
    if (examples[i].label >= model.class_count()) {
      throw RangeError("example " + std::to_string(i) + " has label " + std::to_string(examples[i].label) +
                       " but the model has " + std::to_string(model.class_count()) + " classes");
    }
  }
}

}  // namespace

std::vector<AttackResult<double>> attack_results(const ClassifierModel& model,
                                                 std::span<const Example<double>> examples,
                                                 const RunConfig& config) {
  validate(config);
  check_compatible(model, examples);

  std::vector<std::optional<AttackResult<double>>> slots(examples.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < examples.size(); i = next++) {
      try {
        slots[i] = attack_one(model, examples[i], static_cast<std::int64_t>(i), config);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(config.parallelism),
                                             std::max<std::size_t>(examples.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<AttackResult<double>> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<ResultRecord> attack_examples(const ClassifierModel& model, std::span<const Example<double>> examples,
                                          const RunConfig& config) {
  const auto results = attack_results(model, examples, config);
  std::vector<ResultRecord> records;
  records.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    records.push_back(make_record(static_cast<std::int64_t>(i), examples[i].label, results[i], config.epsilon));
  }
  return records;
}

std::vector<ResultRecord> cmd_attack(const RunConfig& config) {
  validate(config);
  if (config.out_path.empty()) throw ConfigError("--out is required");
  const auto model = load_model(config.model_path);
  const auto examples = load_dataset(config.data_path);
  auto records = attack_examples(model, examples, config);
  save_results(records, config.out_path);
  return records;
}

ReportOutput cmd_report(const ReportConfig& config) {
  if (!(config.epsilon > 0 && config.epsilon <= 1)) throw ConfigError("epsilon must lie in (0,1]");
  auto records = load_results(config.results_path);
  if (config.drop_misclassified) records = drop_misclassified(records);
  if (records.empty()) throw EmptyInput("results file '" + config.results_path + "' has no records");

  ReportOutput out;
  out.report = evaluate(records, config.epsilon, config.cap);
  out.json = dump_report(out.report);
  if (!config.out_path.empty()) detail::write_file(config.out_path, out.json);

  const bool has_history = std::any_of(records.begin(), records.end(),
                                       [](const ResultRecord& r) { return !r.history.empty(); });
  if (has_history) out.curve = build_curve(records, config.curve_kind, config.epsilon, config.cap);
  if (!config.curve_path.empty()) {
    if (!out.curve) throw MissingHistory("results carry no history; cannot emit a curve");
    detail::write_file(config.curve_path, dump_curve_csv(*out.curve));
  }
  return out;
}

FixtureKind parse_fixture_kind(const std::string& name) {
  if (name == "linear-model") return FixtureKind::linear_model;
  if (name == "mlp-model") return FixtureKind::mlp_model;
  if (name == "gaussian-dataset") return FixtureKind::gaussian_dataset;
  throw ConfigError("unknown fixture kind '" + name + "' (linear-model, mlp-model, gaussian-dataset)");
}

void cmd_generate(const GenerateConfig& config) {
  if (config.out_path.empty()) throw ConfigError("--out is required");
  switch (config.kind) {
    case FixtureKind::linear_model: {
      if (config.weights.empty()) throw ConfigError("linear-model needs --weights");
      const Vector<double> w = Eigen::Map<const Vector<double>>(config.weights.data(),
                                                                static_cast<Eigen::Index>(config.weights.size()));
      save_model(linear_model(w, config.threshold), config.out_path);
      return;
    }
    case FixtureKind::mlp_model: {
      const GaussianFixture fixture(config.gaussian);
      const auto train = fixture.sample(config.train_samples, kTrainStream);
      TrainSpec spec;
      spec.hidden = config.hidden;
      spec.epochs = config.epochs;
      spec.seed = config.gaussian.seed;
      save_model(train_mlp(train, config.gaussian.classes, spec), config.out_path);
      return;
    }
    case FixtureKind::gaussian_dataset: {
      if (config.samples < 1) throw ConfigError("--samples must be >= 1");
      const GaussianFixture fixture(config.gaussian);
      std::vector<Example<double>> data;
      if (config.correct_only) {
        if (config.model_path.empty()) throw ConfigError("--correct-only needs --model");
        const auto model = load_model(config.model_path);
        const auto pool = fixture.sample(config.samples * 4, kDatasetStream);
        for (const auto& ex : pool) {
          if (data.size() == config.samples) break;
          if (model.predict(ex.features) == ex.label) data.push_back(ex);
        }
        if (data.size() < config.samples) {
          throw ConfigError("model classifies too few samples correctly; increase --separation");
        }
      } else {
        data = fixture.sample(config.samples, kDatasetStream);
      }
      save_dataset(data, config.out_path);
      if (!config.meta_path.empty()) {
        nlohmann::json meta = {{"dim", config.gaussian.dim},
                               {"classes", config.gaussian.classes},
                               {"separation", config.gaussian.separation},
                               {"sigma", config.gaussian.sigma},
                               {"seed", config.gaussian.seed}};
        if (config.gaussian.classes == 2) {
          std::vector<double> margins;
          for (const auto& ex : data) margins.push_back(fixture.margin(ex.features));
          meta["normal"] = std::vector<double>(fixture.normal().begin(), fixture.normal().end());
          meta["offset"] = fixture.offset();
          meta["margins"] = margins;
          meta["median_margin"] = median(margins);
        }
        detail::write_file(config.meta_path, meta.dump(2) + "\n");
      }
      return;
    }
  }
}

}  // namespace rays
