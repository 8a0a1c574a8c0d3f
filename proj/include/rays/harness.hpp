#ifndef RAYS_HARNESS_HPP
#define RAYS_HARNESS_HPP

#include "rays/fixtures.hpp"
#include "rays/metrics.hpp"
#include "rays/records.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rays {

enum class Algorithm { naive, hierarchical, random_baseline };
enum class RunMode { early_stop, full_budget };

const char* to_string(Algorithm algo);
const char* to_string(RunMode mode);
Algorithm parse_algorithm(const std::string& name);
RunMode parse_mode(const std::string& name);

struct RunConfig {
  std::string model_path;
  std::string data_path;
  std::string out_path;
  double epsilon = 0.3;
  std::int64_t budget = 10000;
  double tol = 1e-3;
  Algorithm algo = Algorithm::hierarchical;
  RunMode mode = RunMode::early_stop;
  std::uint64_t seed = 0;  // random baseline only
  int parallelism = 1;
};

/// Throws ConfigError unless epsilon in (0,1], 0 < tol < epsilon, budget >= 1
/// and parallelism >= 1.
void validate(const RunConfig& config);

/// Seed used for example `index` by the random baseline; independent of
/// scheduling so results do not depend on parallelism.
std::uint64_t example_seed(std::uint64_t seed, std::int64_t index);

/// Attacks every example with its own oracle and returns records in input
/// order. Up to config.parallelism examples run concurrently.
std::vector<ResultRecord> attack_examples(const ClassifierModel& model, std::span<const Example<double>> examples,
                                          const RunConfig& config);

/// attack_examples with the record-level AttackResults kept (for checks that
/// need d_best).
std::vector<AttackResult<double>> attack_results(const ClassifierModel& model,
                                                 std::span<const Example<double>> examples,
                                                 const RunConfig& config);

/// Load model and dataset, attack, write the results file.
std::vector<ResultRecord> cmd_attack(const RunConfig& config);

struct ReportConfig {
  std::string results_path;
  double epsilon = 0.3;
  double cap = 1.0;
  std::string out_path;  // empty: caller prints the returned JSON
  std::string curve_path;
  CurveKind curve_kind = CurveKind::asr_vs_queries;
  bool drop_misclassified = false;
};

struct ReportOutput {
  EvaluationReport report;
  std::string json;
  std::optional<CurveSeries> curve;
};

ReportOutput cmd_report(const ReportConfig& config);

enum class FixtureKind { linear_model, mlp_model, gaussian_dataset };
FixtureKind parse_fixture_kind(const std::string& name);

struct GenerateConfig {
  FixtureKind kind = FixtureKind::gaussian_dataset;
  GaussianSpec gaussian;
  std::size_t samples = 200;
  Eigen::Index hidden = 32;
  std::size_t train_samples = 2000;
  int epochs = 40;
  std::vector<double> weights;  // linear-model normal
  double threshold = 0;
  bool correct_only = false;  // dataset: keep only examples the model at model_path classifies correctly
  std::string model_path;
  std::string out_path;
  std::string meta_path;  // optional JSON with the generating hyperplane and margins
};

void cmd_generate(const GenerateConfig& config);

/// The sample stream shared by `generate gaussian-dataset` (stream 1) and
/// the MLP training set (stream 0).
inline constexpr std::uint64_t kTrainStream = 0;
inline constexpr std::uint64_t kDatasetStream = 1;

}  // namespace rays

#endif  // RAYS_HARNESS_HPP
