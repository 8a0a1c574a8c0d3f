#include "rays/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

namespace rays {

namespace {

void require_nonempty(std::span<const ResultRecord> results, const char* what) {
  if (results.empty()) throw EmptyInput(std::string(what) + " needs at least one result");
}

bool succeeded(const ResultRecord& r, double epsilon) { return r.distortion() <= epsilon; }

double capped_distance(double distortion, double cap) { return std::min(distortion, cap); }

// Distortion after the first `t` searches of an example; an example with a
// shorter history holds its last value, an empty history counts as infinite.
double distortion_after(const ResultRecord& r, std::size_t t) {
  if (r.history.empty()) return infinity<double>();
  const auto& c = r.history[std::min(t, r.history.size()) - 1];
  return r.distortion_at(c.r_best);
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw EmptyInput("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

double attack_success_rate(std::span<const ResultRecord> results, double epsilon) {
  require_nonempty(results, "attack success rate");
  const auto hits = std::count_if(results.begin(), results.end(),
                                  [&](const ResultRecord& r) { return succeeded(r, epsilon); });
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

QueryStats query_stats(std::span<const ResultRecord> results, double epsilon) {
  std::vector<double> q;
  for (const auto& r : results) {
    if (succeeded(r, epsilon)) q.push_back(static_cast<double>(r.queries_used));
  }
  if (q.empty()) throw NoSuccesses("no successful attacks at epsilon " + std::to_string(epsilon));
  QueryStats s;
  double sum = 0;
  for (double v : q) sum += v;
  s.average = sum / static_cast<double>(q.size());
  s.median = median(std::move(q));
  return s;
}

AdbdSummary adbd(std::span<const ResultRecord> results, double cap) {
  require_nonempty(results, "ADBD");
  if (!(cap > 0)) throw ConfigError("ADBD cap must be positive");
  AdbdSummary out;
  double sum = 0;
  for (const auto& r : results) {
    if (!r.linf_distortion) ++out.failures_capped;
    sum += capped_distance(r.distortion(), cap);
  }
  out.adbd = sum / static_cast<double>(results.size());
  return out;
}

EvaluationReport evaluate(std::span<const ResultRecord> results, double epsilon, double cap) {
  require_nonempty(results, "evaluation");
  EvaluationReport rep;
  rep.n_examples = results.size();
  rep.epsilon = epsilon;
  rep.cap = cap;
  rep.n_successes = static_cast<std::size_t>(std::count_if(
      results.begin(), results.end(), [&](const ResultRecord& r) { return succeeded(r, epsilon); }));
  rep.asr = attack_success_rate(results, epsilon);
  rep.robust_accuracy = 1.0 - rep.asr;
  if (rep.n_successes > 0) {
    const auto qs = query_stats(results, epsilon);
    rep.avg_queries = qs.average;
    rep.median_queries = qs.median;
  }
  const auto a = adbd(results, cap);
  rep.adbd = a.adbd;
  rep.failures_capped = a.failures_capped;
  return rep;
}

std::string dump_report(const EvaluationReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json j = {{"n_examples", r.n_examples},
                      {"epsilon", r.epsilon},
                      {"cap", r.cap},
                      {"n_successes", r.n_successes},
                      {"asr", r.asr},
                      {"robust_accuracy", r.robust_accuracy},
                      {"avg_queries", opt(r.avg_queries)},
                      {"median_queries", opt(r.median_queries)},
                      {"adbd", r.adbd},
                      {"failures_capped", r.failures_capped}};
  return j.dump(2) + "\n";
}

const char* to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::asr_vs_queries: return "asr_vs_queries";
    case CurveKind::adbd_vs_iterations: return "adbd_vs_iterations";
    case CurveKind::robacc_vs_iterations: return "robacc_vs_iterations";
  }
  return "unknown";
}

CurveKind parse_curve_kind(const std::string& name) {
  for (auto k : {CurveKind::asr_vs_queries, CurveKind::adbd_vs_iterations, CurveKind::robacc_vs_iterations}) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown curve kind '" + name + "'");
}

CurveSeries build_curve(std::span<const ResultRecord> results, CurveKind kind, double epsilon, double cap) {
  require_nonempty(results, "curve");
  for (const auto& r : results) {
    if (r.history.empty() && r.queries_used > 0 && r.linf_distortion) {
      throw MissingHistory("result " + std::to_string(r.example_index) + " has a radius but no history");
    }
  }
  CurveSeries out;
  out.kind = kind;
  const double n = static_cast<double>(results.size());

  if (kind == CurveKind::asr_vs_queries) {
    std::map<std::int64_t, std::size_t> first_success;
    for (const auto& r : results) {
      for (const auto& c : r.history) {
        if (r.distortion_at(c.r_best) <= epsilon) {
          ++first_success[c.queries];
          break;
        }
      }
    }
    out.points.push_back({0, 0.0});
    std::size_t seen = 0;
    for (const auto& [q, count] : first_success) {
      seen += count;
      const double v = static_cast<double>(seen) / n;
      if (q == 0) {
        out.points.front().value = v;
      } else {
        out.points.push_back({q, v});
      }
    }
    return out;
  }

  std::size_t longest = 0;
  for (const auto& r : results) longest = std::max(longest, r.history.size());
  for (std::size_t t = 1; t <= longest; ++t) {
    double acc = 0;
    for (const auto& r : results) {
      const double d = distortion_after(r, t);
      acc += kind == CurveKind::adbd_vs_iterations ? capped_distance(d, cap) : (d > epsilon ? 1.0 : 0.0);
    }
    out.points.push_back({static_cast<std::int64_t>(t), acc / n});
  }
  return out;
}

std::string dump_curve_csv(const CurveSeries& curve) {
  std::string out = "query_count,value\n";
  char buf[32];
  for (const auto& p : curve.points) {
    out += std::to_string(p.query_count);
    out += ',';
    const auto res = std::to_chars(buf, buf + sizeof buf, p.value);
    out.append(buf, res.ptr);
    out += '\n';
  }
  return out;
}

}  // namespace rays
