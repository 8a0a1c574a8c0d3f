// rays: hard-label ray-search attacks, reports and fixtures.
//
//   rays attack   --model m.json --data d.csv --epsilon 0.3 --out results.json
//   rays report   --results results.json --epsilon 0.3 [--out report.json] [--curve-out curve.csv]
//   rays generate gaussian-dataset --dim 16 --samples 200 --seed 1 --out data.csv

#include "rays/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

namespace {

int fail(const char* code, const std::string& message) {
  std::cerr << nlohmann::json{{"error", code}, {"message", message}}.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hard-label ray-search adversarial attacks"};
  app.require_subcommand(1);

  rays::RunConfig run;
  std::string algo = "hierarchical";
  std::string mode = "early-stop";
  auto* attack = app.add_subcommand("attack", "Attack every example of a dataset and write a results file");
  attack->add_option("--model", run.model_path, "Model JSON file")->required();
  attack->add_option("--data", run.data_path, "Dataset CSV file")->required();
  attack->add_option("--epsilon", run.epsilon, "L-inf success threshold")->capture_default_str();
  attack->add_option("--budget", run.budget, "Query budget per example")->capture_default_str();
  attack->add_option("--tol", run.tol, "Binary search tolerance (L2 radius)")->capture_default_str();
  attack->add_option("--algo", algo, "naive | hierarchical | random-baseline")->capture_default_str();
  attack->add_option("--mode", mode, "early-stop | full-budget")->capture_default_str();
  attack->add_option("--seed", run.seed, "Seed for random-baseline")->capture_default_str();
  attack->add_option("--parallelism", run.parallelism, "Concurrent examples")->capture_default_str();
  attack->add_option("--out", run.out_path, "Results JSON file")->required();

  rays::ReportConfig rep;
  std::string curve_kind = "asr_vs_queries";
  auto* report = app.add_subcommand("report", "Summarize a results file");
  report->add_option("--results", rep.results_path, "Results JSON file")->required();
  report->add_option("--epsilon", rep.epsilon, "L-inf success threshold")->capture_default_str();
  report->add_option("--cap", rep.cap, "ADBD value charged for failed attacks")->capture_default_str();
  report->add_option("--out", rep.out_path, "Report JSON file (default: stdout)");
  report->add_option("--curve-out", rep.curve_path, "Curve CSV file");
  report->add_option("--curve-kind", curve_kind, "asr_vs_queries | adbd_vs_iterations | robacc_vs_iterations")
      ->capture_default_str();
  report->add_flag("--drop-misclassified", rep.drop_misclassified,
                   "Ignore examples the clean model already misclassifies");

  rays::GenerateConfig gen;
  std::string fixture_kind;
  std::uint64_t gen_seed = 1;
  auto* generate = app.add_subcommand("generate", "Write reproducible fixture models and datasets");
  generate->add_option("kind", fixture_kind, "linear-model | mlp-model | gaussian-dataset")->required();
  generate->add_option("--dim", gen.gaussian.dim, "Input dimension")->capture_default_str();
  generate->add_option("--classes", gen.gaussian.classes, "Class count")->capture_default_str();
  generate->add_option("--separation", gen.gaussian.separation, "L2 distance of class means from the centre")
      ->capture_default_str();
  generate->add_option("--sigma", gen.gaussian.sigma, "Per-coordinate noise")->capture_default_str();
  generate->add_option("--samples", gen.samples, "Dataset rows")->capture_default_str();
  generate->add_option("--hidden", gen.hidden, "MLP hidden width")->capture_default_str();
  generate->add_option("--train-samples", gen.train_samples, "MLP training rows")->capture_default_str();
  generate->add_option("--epochs", gen.epochs, "MLP training epochs")->capture_default_str();
  generate->add_option("--weights", gen.weights, "Linear-model normal, comma separated")->delimiter(',');
  generate->add_option("--threshold", gen.threshold, "Linear-model threshold")->capture_default_str();
  generate->add_flag("--correct-only", gen.correct_only, "Keep only rows --model classifies correctly");
  generate->add_option("--model", gen.model_path, "Model used by --correct-only");
  generate->add_option("--meta", gen.meta_path, "Dataset metadata JSON (hyperplane, margins)");
  generate->add_option("--seed", gen_seed, "Seed")->capture_default_str();
  generate->add_option("--out", gen.out_path, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("UsageError", e.what());
  }

  try {
    if (*attack) {
      run.algo = rays::parse_algorithm(algo);
      run.mode = rays::parse_mode(mode);
      const auto records = rays::cmd_attack(run);
      std::cerr << "attacked " << records.size() << " examples -> " << run.out_path << "\n";
    } else if (*report) {
      rep.curve_kind = rays::parse_curve_kind(curve_kind);
      const auto out = rays::cmd_report(rep);
      if (rep.out_path.empty()) std::cout << out.json;
    } else if (*generate) {
      gen.kind = rays::parse_fixture_kind(fixture_kind);
      gen.gaussian.seed = gen_seed;
      if (gen.kind == rays::FixtureKind::linear_model && generate->count("--dim") > 0 &&
          static_cast<Eigen::Index>(gen.weights.size()) != gen.gaussian.dim) {
        throw rays::ConfigError("--weights has " + std::to_string(gen.weights.size()) + " entries but --dim is " +
                                std::to_string(gen.gaussian.dim));
      }
      rays::cmd_generate(gen);
    }
  } catch (const rays::Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::exception& e) {
    return fail("InternalError", e.what());
  }
  return 0;
}
