#include "rays/dataset.hpp"

#include "io_util.hpp"

#include <charconv>
#include <sstream>
#include <string_view>

namespace rays {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string row_tag(std::size_t line) { return "dataset line " + std::to_string(line); }

}  // namespace

std::vector<Example<double>> parse_dataset(const std::string& csv_text) {
  std::vector<Example<double>> out;
  std::istringstream in(csv_text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;

    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    for (;;) {
      const auto comma = row.find(',', pos);
      cells.push_back(trim(row.substr(pos, comma - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (cells.size() < 2) throw ParseError(row_tag(line_no) + ": need a label and at least one feature");

    Example<double> ex;
    const auto lab = cells[0];
    auto [lp, lec] = std::from_chars(lab.data(), lab.data() + lab.size(), ex.label);
    if (lec != std::errc{} || lp != lab.data() + lab.size() || ex.label < 0) {
      throw ParseError(row_tag(line_no) + ": label '" + std::string(lab) + "' is not a non-negative integer");
    }
    ex.features.resize(static_cast<Eigen::Index>(cells.size() - 1));
    for (std::size_t i = 1; i < cells.size(); ++i) {
      const auto cell = cells[i];
      double v = 0;
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || p != cell.data() + cell.size()) {
        throw ParseError(row_tag(line_no) + ": feature '" + std::string(cell) + "' is not a number");
      }
      if (!(v >= 0.0 && v <= 1.0)) {
        throw RangeError(row_tag(line_no) + ": feature " + std::to_string(i - 1) + " = " + std::string(cell) +
                         " lies outside [0,1]");
      }
      ex.features[static_cast<Eigen::Index>(i - 1)] = v;
    }
    if (!out.empty() && ex.dim() != out.front().dim()) {
      throw ParseError(row_tag(line_no) + ": has " + std::to_string(ex.dim()) + " features, expected " +
                       std::to_string(out.front().dim()));
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<Example<double>> load_dataset(const std::string& path) {
  return parse_dataset(detail::read_file(path));
}

std::string dump_dataset(const std::vector<Example<double>>& examples) {
  std::string out;
  char buf[32];
  for (const auto& ex : examples) {
    out += std::to_string(ex.label);
    for (Eigen::Index i = 0; i < ex.dim(); ++i) {
      const auto res = std::to_chars(buf, buf + sizeof buf, ex.features[i]);
      out += ',';
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

void save_dataset(const std::vector<Example<double>>& examples, const std::string& path) {
  detail::write_file(path, dump_dataset(examples));
}

}  // namespace rays
