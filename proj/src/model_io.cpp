#include "rays/model.hpp"

#include "io_util.hpp"

#include <json.hpp>

namespace rays {

using nlohmann::json;

const char* to_string(ModelKind kind) {
  return kind == ModelKind::linear ? "linear" : "mlp";
}

namespace {

std::vector<double> number_array(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw ParseError(what + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

DenseLayer<double> parse_layer(const json& j, std::size_t index) {
  const std::string where = "layers[" + std::to_string(index) + "]";
  if (!j.is_object() || !j.contains("weights") || !j.contains("bias")) {
    throw ParseError(where + " must be an object with 'weights' and 'bias'");
  }
  const json& rows = j.at("weights");
  if (!rows.is_array() || rows.empty()) throw ParseError(where + ".weights must be a non-empty array of rows");

  std::vector<std::vector<double>> parsed;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    parsed.push_back(number_array(rows[r], where + ".weights[" + std::to_string(r) + "]"));
    if (parsed.back().size() != parsed.front().size()) {
      throw ShapeError(where + ".weights is ragged: row " + std::to_string(r) + " has " +
                       std::to_string(parsed.back().size()) + " entries, row 0 has " +
                       std::to_string(parsed.front().size()));
    }
  }
  DenseLayer<double> layer;
  layer.weights.resize(static_cast<Eigen::Index>(parsed.size()), static_cast<Eigen::Index>(parsed.front().size()));
  for (std::size_t r = 0; r < parsed.size(); ++r) {
    for (std::size_t c = 0; c < parsed[r].size(); ++c) {
      layer.weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parsed[r][c];
    }
  }
  const auto bias = number_array(j.at("bias"), where + ".bias");
  layer.bias = Eigen::Map<const Vector<double>>(bias.data(), static_cast<Eigen::Index>(bias.size()));
  return layer;
}

}  // namespace

ClassifierModel parse_model(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("model file must be a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ParseError("model file needs a string 'kind'");
  const auto kind_name = j.at("kind").get<std::string>();
  ModelKind kind;
  if (kind_name == "linear") {
    kind = ModelKind::linear;
  } else if (kind_name == "mlp") {
    kind = ModelKind::mlp;
  } else {
    throw ParseError("unknown model kind '" + kind_name + "'");
  }
  if (!j.contains("layers") || !j.at("layers").is_array()) throw ParseError("model file needs a 'layers' array");

  std::vector<DenseLayer<double>> layers;
  for (std::size_t i = 0; i < j.at("layers").size(); ++i) layers.push_back(parse_layer(j.at("layers")[i], i));
  return ClassifierModel(kind, std::move(layers));
}

ClassifierModel load_model(const std::string& path) { return parse_model(detail::read_file(path)); }

std::string dump_model(const ClassifierModel& model) {
  json layers = json::array();
  for (const auto& l : model.layers()) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) row.push_back(l.weights(r, c));
      rows.push_back(std::move(row));
    }
    layers.push_back({{"weights", std::move(rows)}, {"bias", std::vector<double>(l.bias.begin(), l.bias.end())}});
  }
  json j = {{"kind", to_string(model.kind())}, {"layers", std::move(layers)}};
  return j.dump(2) + "\n";
}

void save_model(const ClassifierModel& model, const std::string& path) {
  detail::write_file(path, dump_model(model));
}

}  // namespace rays
