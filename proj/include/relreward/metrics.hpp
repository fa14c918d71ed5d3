#ifndef RELREWARD_METRICS_HPP_
#define RELREWARD_METRICS_HPP_

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace relreward {

// One row of metrics.csv: (step, metric, value, seed).
struct MetricRow {
  std::int64_t step = 0;
  std::string metric;
  double value = 0.0;
  std::int64_t seed = 0;

  friend bool operator==(const MetricRow&, const MetricRow&) = default;
};

// Shortest decimal text that reads back as the same double.
inline std::string format_double(double v) { return nlohmann::json(v).dump(); }

inline std::string metrics_csv(const std::vector<MetricRow>& rows) {
  std::string out = "step,metric,value,seed\n";
  for (const auto& r : rows) {
    out += std::to_string(r.step) + "," + r.metric + "," + format_double(r.value) + "," +
           std::to_string(r.seed) + "\n";
  }
  return out;
}

inline std::vector<MetricRow> parse_metrics_csv(std::istream& in, const std::string& origin) {
  std::vector<MetricRow> rows;
  std::string line;
  if (!std::getline(in, line) || line != "step,metric,value,seed") {
    throw std::invalid_argument(origin + ": missing header 'step,metric,value,seed'");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    auto bad = [&] {
      return std::invalid_argument(origin + ":" + std::to_string(lineno) + ": malformed row '" +
                                   line + "'");
    };
    if (cells.size() != 4 || cells[1].empty()) throw bad();
    MetricRow r;
    try {
      std::size_t used = 0;
      r.step = std::stoll(cells[0], &used);
      if (used != cells[0].size()) throw bad();
      r.metric = cells[1];
      if (cells[2] == "NaN" || cells[2] == "null") {
        r.value = std::numeric_limits<double>::quiet_NaN();
      } else {
        r.value = std::stod(cells[2], &used);
        if (used != cells[2].size()) throw bad();
      }
      r.seed = std::stoll(cells[3], &used);
      if (used != cells[3].size()) throw bad();
    } catch (const std::logic_error&) {
      throw bad();
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<MetricRow> load_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return parse_metrics_csv(in, path);
}

}  // namespace relreward

#endif  // RELREWARD_METRICS_HPP_
