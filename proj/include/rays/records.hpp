#ifndef RAYS_RECORDS_HPP
#define RAYS_RECORDS_HPP

#include "rays/search.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rays {

/// One line of a results file. Infinite radii are stored as nullopt and
/// serialized as JSON null.
struct ResultRecord {
  std::int64_t example_index = 0;
  Label clean_label = 0;
  Label predicted_label = 0;
  std::int64_t queries_used = 0;
  std::optional<double> r_best;
  std::optional<double> linf_distortion;
  bool success = false;
  std::vector<Checkpoint<double>> history;
  std::int64_t dim = 0;

  /// The clean model already got this example wrong; recorded with r_best = 0.
  bool misclassified() const { return predicted_label != clean_label; }
  /// L-inf distortion, infinity when the attack found nothing.
  double distortion() const { return linf_distortion.value_or(infinity<double>()); }
  /// Distortion implied by a radius on this record's dimension.
  double distortion_at(double radius) const;

  bool operator==(const ResultRecord&) const = default;
};

ResultRecord make_record(std::int64_t example_index, Label clean_label, const AttackResult<double>& result,
                         double epsilon);

std::string dump_results(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> parse_results(const std::string& json_text);
std::vector<ResultRecord> load_results(const std::string& path);
void save_results(const std::vector<ResultRecord>& records, const std::string& path);

std::vector<ResultRecord> drop_misclassified(const std::vector<ResultRecord>& records);

}  // namespace rays

#endif  // RAYS_RECORDS_HPP
