#include "rays/records.hpp"

#include "io_util.hpp"

#include <json.hpp>

#include <cmath>

namespace rays {

using nlohmann::json;

double ResultRecord::distortion_at(double radius) const {
  return radius / std::sqrt(static_cast<double>(dim));
}

ResultRecord make_record(std::int64_t example_index, Label clean_label, const AttackResult<double>& result,
                         double epsilon) {
  ResultRecord rec;
  rec.example_index = example_index;
  rec.clean_label = clean_label;
  rec.predicted_label = result.initial_label;
  rec.queries_used = result.queries_used;
  rec.dim = result.dim();
  if (std::isfinite(result.r_best)) {
    rec.r_best = result.r_best;
    rec.linf_distortion = result.linf_distortion();
  }
  rec.success = rec.linf_distortion && *rec.linf_distortion <= epsilon;
  rec.history = result.history;
  return rec;
}

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const ResultRecord& r) {
  json history = json::array();
  for (const auto& c : r.history) history.push_back(json::array({c.queries, finite_or_null(c.r_best)}));
  return json{{"example_index", r.example_index},
              {"clean_label", r.clean_label},
              {"predicted_label", r.predicted_label},
              {"queries_used", r.queries_used},
              {"r_best", r.r_best ? json(*r.r_best) : json(nullptr)},
              {"linf_distortion", r.linf_distortion ? json(*r.linf_distortion) : json(nullptr)},
              {"success", r.success},
              {"dim", r.dim},
              {"history", std::move(history)}};
}

const json& field(const json& obj, const char* name, std::size_t index) {
  if (!obj.contains(name)) {
    throw ParseError("result record " + std::to_string(index) + " lacks field '" + name + "'");
  }
  return obj.at(name);
}

std::int64_t integer_field(const json& obj, const char* name, std::size_t index) {
  const json& v = field(obj, name, index);
  if (!v.is_number_integer()) {
    throw ParseError("result record " + std::to_string(index) + ": '" + name + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

std::optional<double> nullable_number(const json& v, const std::string& what) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw ParseError(what + " must be a number or null");
  return v.get<double>();
}

ResultRecord from_json(const json& j, std::size_t index) {
  if (!j.is_object()) throw ParseError("result record " + std::to_string(index) + " is not an object");
  const std::string tag = "result record " + std::to_string(index);
  ResultRecord r;
  r.example_index = integer_field(j, "example_index", index);
  r.clean_label = integer_field(j, "clean_label", index);
  r.predicted_label = integer_field(j, "predicted_label", index);
  r.queries_used = integer_field(j, "queries_used", index);
  r.dim = integer_field(j, "dim", index);
  if (r.dim < 1) throw ParseError(tag + ": dim must be positive");
  r.r_best = nullable_number(field(j, "r_best", index), tag + " r_best");
  r.linf_distortion = nullable_number(field(j, "linf_distortion", index), tag + " linf_distortion");
  const json& success = field(j, "success", index);
  if (!success.is_boolean()) throw ParseError(tag + ": 'success' must be a boolean");
  r.success = success.get<bool>();
  const json& history = field(j, "history", index);
  if (!history.is_array()) throw ParseError(tag + ": 'history' must be an array");
  for (const auto& c : history) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer()) {
      throw ParseError(tag + ": history entries must be [queries, r_best]");
    }
    r.history.push_back({c[0].get<std::int64_t>(),
                         nullable_number(c[1], tag + " history radius").value_or(infinity<double>())});
  }
  return r;
}

}  // namespace

std::string dump_results(const std::vector<ResultRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(to_json(r));
  return arr.dump(1) + "\n";
}

std::vector<ResultRecord> parse_results(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("results file is not valid JSON: ") + e.what());
  }
  if (!j.is_array()) throw ParseError("results file must be a JSON array");
  std::vector<ResultRecord> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(from_json(j[i], i));
  return out;
}

std::vector<ResultRecord> load_results(const std::string& path) { return parse_results(detail::read_file(path)); }

void save_results(const std::vector<ResultRecord>& records, const std::string& path) {
  detail::write_file(path, dump_results(records));
}

std::vector<ResultRecord> drop_misclassified(const std::vector<ResultRecord>& records) {
  std::vector<ResultRecord> out;
  for (const auto& r : records) {
    if (!r.misclassified()) out.push_back(r);
  }
  return out;
}

}  // namespace rays
