#ifndef RAYS_METRICS_HPP
#define RAYS_METRICS_HPP

#include "rays/records.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rays {

/// Median with the mean-of-central-pair rule for even lengths.
double median(std::vector<double> values);

/// Fraction of results whose L-inf distortion is <= epsilon.
double attack_success_rate(std::span<const ResultRecord> results, double epsilon);

struct QueryStats {
  double average = 0;
  double median = 0;  // mean of the central pair for even counts
};

/// Mean and median of queries_used over successful attacks only.
QueryStats query_stats(std::span<const ResultRecord> results, double epsilon);

struct AdbdSummary {
  double adbd = 0;
  std::size_t failures_capped = 0;
};

/// Mean over all results of min(distortion, cap); infinite radii count as cap.
AdbdSummary adbd(std::span<const ResultRecord> results, double cap = 1.0);

struct EvaluationReport {
  std::size_t n_examples = 0;
  double epsilon = 0;
  double cap = 1.0;
  std::size_t n_successes = 0;
  double asr = 0;
  double robust_accuracy = 0;
  std::optional<double> avg_queries;
  std::optional<double> median_queries;
  double adbd = 0;
  std::size_t failures_capped = 0;
};

EvaluationReport evaluate(std::span<const ResultRecord> results, double epsilon, double cap = 1.0);
std::string dump_report(const EvaluationReport& report);

enum class CurveKind { asr_vs_queries, adbd_vs_iterations, robacc_vs_iterations };

const char* to_string(CurveKind kind);
CurveKind parse_curve_kind(const std::string& name);

struct CurvePoint {
  std::int64_t query_count = 0;  // iteration index for the *_vs_iterations kinds
  double value = 0;

  bool operator==(const CurvePoint&) const = default;
};

struct CurveSeries {
  CurveKind kind = CurveKind::asr_vs_queries;
  std::vector<CurvePoint> points;
};

/// asr_vs_queries: starts at (0, 0) and steps at each first-success query
/// count. The iteration kinds: value after t searches, t = 1..longest
/// history, with a finished example holding its final value.
CurveSeries build_curve(std::span<const ResultRecord> results, CurveKind kind, double epsilon,
                        double cap = 1.0);
std::string dump_curve_csv(const CurveSeries& curve);

}  // namespace rays

#endif  // RAYS_METRICS_HPP
