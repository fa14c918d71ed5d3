#ifndef RELREWARD_ANALYSIS_HPP_
#define RELREWARD_ANALYSIS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "relreward/metrics.hpp"

namespace relreward::analysis {

using Json = nlohmann::ordered_json;

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

struct Point {
  std::int64_t step = 0;
  double value = 0.0;  // NaN marks a gap
  std::int64_t seed = 0;
};

// One metric, possibly over several seeds. Within a seed, steps increase
// strictly; seeds may be interleaved.
struct MetricSeries {
  std::string name;
  std::vector<Point> points;

  std::vector<std::int64_t> seeds() const {
    std::vector<std::int64_t> out;
    for (const auto& p : points) {
      if (std::find(out.begin(), out.end(), p.seed) == out.end()) out.push_back(p.seed);
    }
    return out;
  }
  MetricSeries for_seed(std::int64_t seed) const {
    MetricSeries s{name, {}};
    for (const auto& p : points) {
      if (p.seed == seed) s.points.push_back(p);
    }
    return s;
  }
  std::vector<double> values() const {
    std::vector<double> v;
    for (const auto& p : points) v.push_back(p.value);
    return v;
  }
};

inline MetricSeries make_series(std::string name, const std::vector<double>& values,
                                std::int64_t seed = 0) {
  MetricSeries s{std::move(name), {}};
  for (std::size_t i = 0; i < values.size(); ++i) {
    s.points.push_back({static_cast<std::int64_t>(i), values[i], seed});
  }
  return s;
}

inline void check_steps(const MetricSeries& s) {
  std::map<std::int64_t, std::int64_t> last;
  for (const auto& p : s.points) {
    auto it = last.find(p.seed);
    if (it != last.end() && p.step <= it->second) {
      throw std::invalid_argument("series '" + s.name + "': steps must increase strictly for seed " +
                                  std::to_string(p.seed));
    }
    last[p.seed] = p.step;
  }
}

// Groups metrics.csv rows into one series per metric, in first-seen order.
inline std::vector<MetricSeries> series_from_rows(const std::vector<MetricRow>& rows) {
  std::vector<MetricSeries> out;
  std::map<std::string, std::size_t> index;
  for (const auto& r : rows) {
    auto [it, fresh] = index.try_emplace(r.metric, out.size());
    if (fresh) out.push_back({r.metric, {}});
    out[it->second].points.push_back({r.step, r.value, r.seed});
  }
  for (auto& s : out) {
    std::stable_sort(s.points.begin(), s.points.end(), [](const Point& a, const Point& b) {
      return a.seed != b.seed ? a.seed < b.seed : a.step < b.step;
    });
    check_steps(s);
  }
  return out;
}

// EMA_t = (1 - alpha) EMA_{t-1} + alpha y_t with alpha = 2 / (1 + window),
// started at the first present value, independently per seed. A gap leaves the
// average unchanged and reports the carried value (NaN before the first
// value), so the output keeps the input's steps.
inline MetricSeries ema_smooth(const MetricSeries& series, int window = 50) {
  if (window < 1) throw std::invalid_argument("ema_smooth: window must be >= 1");
  if (series.points.empty()) throw std::invalid_argument("ema_smooth: empty series '" + series.name + "'");
  check_steps(series);
  const double alpha = 2.0 / (1.0 + window);
  MetricSeries out{series.name, series.points};
  std::map<std::int64_t, double> state;
  for (auto& p : out.points) {
    auto it = state.find(p.seed);
    if (std::isnan(p.value)) {
      p.value = it == state.end() ? kMissing : it->second;
      continue;
    }
    double ema = it == state.end() ? p.value : (1.0 - alpha) * it->second + alpha * p.value;
    state[p.seed] = ema;
    p.value = ema;
  }
  if (state.empty()) throw std::invalid_argument("ema_smooth: series '" + series.name + "' has no values");
  return out;
}

// Sample standard deviation (n - 1) of the last `window` present values of
// each seed, reported at every step; NaN until two values are available.
inline MetricSeries rolling_std(const MetricSeries& series, int window = 50) {
  if (window < 2) throw std::invalid_argument("rolling_std: window must be >= 2");
  check_steps(series);
  MetricSeries out{series.name, series.points};
  std::map<std::int64_t, std::vector<double>> recent;
  for (auto& p : out.points) {
    auto& r = recent[p.seed];
    if (!std::isnan(p.value)) {
      r.push_back(p.value);
      if (static_cast<int>(r.size()) > window) r.erase(r.begin());
    }
    if (r.size() < 2) {
      p.value = kMissing;
      continue;
    }
    double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
    double ss = 0.0;
    for (double v : r) ss += (v - mean) * (v - mean);
    p.value = std::sqrt(ss / static_cast<double>(r.size() - 1));
  }
  return out;
}

inline double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample (n - 1) standard deviation; empty for fewer than two values.
inline std::optional<double> sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return std::nullopt;
  double m = mean_of(v), ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  double ma = mean_of(a), mb = mean_of(b), sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// 1-based ranks; tied values share the average of their positions.
inline std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

struct Correlation {
  double pearson = kMissing;
  double spearman = kMissing;
  std::size_t n = 0;
  std::string diagnostic;  // set when a coefficient is undefined

  bool defined() const { return diagnostic.empty(); }
};

// Inner join on (seed, step), skipping gaps in either series. Joined pairs are
// visited in key order, so swapping the arguments gives bit-identical results.
inline Correlation correlate(const MetricSeries& a, const MetricSeries& b) {
  using Key = std::pair<std::int64_t, std::int64_t>;
  auto present = [](const MetricSeries& s) {
    std::map<Key, double> m;
    for (const auto& p : s.points) {
      if (!std::isnan(p.value)) m[{p.seed, p.step}] = p.value;
    }
    return m;
  };
  const auto left = present(a), right = present(b);
  std::vector<double> x, y;
  for (const auto& [key, value] : left) {
    auto it = right.find(key);
    if (it == right.end()) continue;
    x.push_back(value);
    y.push_back(it->second);
  }
  if (x.size() < 3) {
    throw std::invalid_argument("correlate: insufficient overlap between '" + a.name + "' and '" +
                                b.name + "' (" + std::to_string(x.size()) + " joined points, need 3)");
  }
  Correlation c;
  c.n = x.size();
  auto constant = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y)) {
    c.diagnostic = "undefined correlation: '" + (constant(x) ? a.name : b.name) +
                   "' has zero variance over the joined steps";
    return c;
  }
  c.pearson = pearson(x, y);
  c.spearman = pearson(average_ranks(x), average_ranks(y));
  return c;
}

// Smoothed-curve trend: mean EMA over the first and last `fraction` of the
// points, and the mean rolling std of the raw values over the last fraction.
struct Trend {
  double first = 0.0;
  double last = 0.0;
  double band = 0.0;
  std::size_t n = 0;

  double gain() const { return last - first; }
  bool improved(double k = 3.0) const { return gain() > k * band; }
};

inline Trend trend(const MetricSeries& series, int window = 50, double fraction = 0.1) {
  std::vector<double> ema, sd;
  for (const auto& p : ema_smooth(series, window).points) ema.push_back(p.value);
  for (const auto& p : rolling_std(series, std::max(window, 2)).points) sd.push_back(p.value);
  const std::size_t n = ema.size();
  const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * static_cast<double>(n)));
  auto mean_present = [](auto begin, auto end) {
    double s = 0.0;
    std::size_t c = 0;
    for (auto it = begin; it != end; ++it) {
      if (!std::isnan(*it)) {
        s += *it;
        ++c;
      }
    }
    return c ? s / static_cast<double>(c) : kMissing;
  };
  Trend t;
  t.n = n;
  t.first = mean_present(ema.begin(), ema.begin() + k);
  t.last = mean_present(ema.end() - k, ema.end());
  t.band = mean_present(sd.end() - k, sd.end());
  if (std::isnan(t.band)) t.band = 0.0;
  return t;
}

// "12.00±2.00"; a single seed prints just the mean.
inline std::string format_mean_std(double mean, std::optional<double> sd, int digits = 2) {
  char buf[64];
  if (sd) {
    std::snprintf(buf, sizeof buf, "%.*f±%.*f", digits, mean, digits, *sd);
  } else {
    std::snprintf(buf, sizeof buf, "%.*f", digits, mean);
  }
  return buf;
}

struct SummaryRow {
  std::string metric;
  std::string seed;  // a seed number, or "all" for the cross-seed row
  double mean = 0.0;
  std::optional<double> std;
  std::size_t n = 0;
};

struct RunSummary {
  Json report;
  std::vector<SummaryRow> rows;
  std::vector<MetricRow> curves;  // EMA and rolling std, metric names suffixed
};

inline constexpr const char* kEpisodeReturn = "episode_return";
inline constexpr const char* kEpisodeTrueScore = "episode_true_score";

// Every metrics.csv directly in `dir` or one level below it, sorted by path.
inline std::vector<std::filesystem::path> find_metrics_files(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) throw std::invalid_argument("not a run directory: '" + dir.string() + "'");
  if (fs::is_regular_file(dir / "metrics.csv")) out.push_back(dir / "metrics.csv");
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory() && fs::is_regular_file(e.path() / "metrics.csv")) {
      out.push_back(e.path() / "metrics.csv");
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Per-seed and cross-seed final-window statistics of every episode_* metric.
// The final window is the last `final_fraction` of each seed's points (at
// least one). Also emits smoothed curves, the return/true-score correlation
// and reward-trap counts.
inline RunSummary summarize_rows(const std::vector<MetricRow>& all_rows, int window = 50,
                                 double final_fraction = 0.1) {
  if (all_rows.empty()) throw std::invalid_argument("no metrics found");
  std::vector<MetricSeries> series = series_from_rows(all_rows);
  RunSummary out;
  Json metrics = Json::object();
  for (const auto& s : series) {
    if (s.name.rfind("episode_", 0) != 0) continue;
    Json per_seed = Json::object();
    std::vector<double> finals;
    for (std::int64_t seed : s.seeds()) {
      std::vector<double> v;
      for (double x : s.for_seed(seed).values()) {
        if (!std::isnan(x)) v.push_back(x);
      }
      if (v.empty()) continue;
      std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(final_fraction * static_cast<double>(v.size())));
      std::vector<double> tail(v.end() - static_cast<std::ptrdiff_t>(k), v.end());
      double m = mean_of(tail);
      auto sd = sample_std(tail);
      finals.push_back(m);
      per_seed[std::to_string(seed)] = {{"mean", m}, {"std", sd ? Json(*sd) : Json(nullptr)}, {"n", k}};
      out.rows.push_back({s.name, std::to_string(seed), m, sd, k});
    }
    if (finals.empty()) continue;
    double m = mean_of(finals);
    auto sd = sample_std(finals);
    out.rows.push_back({s.name, "all", m, sd, finals.size()});
    metrics[s.name] = {{"mean", m},
                       {"std", sd ? Json(*sd) : Json(nullptr)},
                       {"n_seeds", finals.size()},
                       {"formatted", format_mean_std(m, sd)},
                       {"per_seed", per_seed}};
  }

  for (const auto& s : series) {
    if (s.name.rfind("episode_", 0) != 0) continue;
    if (std::none_of(s.points.begin(), s.points.end(), [](const Point& p) { return !std::isnan(p.value); })) {
      continue;
    }
    MetricSeries ema = ema_smooth(s, window);
    MetricSeries sd = rolling_std(s, std::max(window, 2));
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      out.curves.push_back({ema.points[i].step, s.name + "_ema", ema.points[i].value, ema.points[i].seed});
      out.curves.push_back({sd.points[i].step, s.name + "_rolling_std", sd.points[i].value, sd.points[i].seed});
    }
  }

  Json corr = nullptr;
  auto find = [&](const char* name) -> const MetricSeries* {
    for (const auto& s : series) {
      if (s.name == name) return &s;
    }
    return nullptr;
  };
  const MetricSeries* ret = find(kEpisodeReturn);
  const MetricSeries* truth = find(kEpisodeTrueScore);
  if (ret && truth) {
    try {
      Correlation c = correlate(*ret, *truth);
      corr = {{"a", kEpisodeReturn}, {"b", kEpisodeTrueScore}, {"n", c.n}};
      if (c.defined()) {
        corr["pearson"] = c.pearson;
        corr["spearman"] = c.spearman;
      } else {
        corr["pearson"] = nullptr;
        corr["spearman"] = nullptr;
        corr["diagnostic"] = c.diagnostic;
      }
    } catch (const std::invalid_argument& e) {
      corr = {{"a", kEpisodeReturn}, {"b", kEpisodeTrueScore}, {"diagnostic", e.what()}};
    }
  }

  Json traps = Json::object();
  std::int64_t total_traps = 0;
  if (const MetricSeries* t = find("reward_traps")) {
    for (std::int64_t seed : t->seeds()) {
      auto v = t->for_seed(seed).values();
      auto n = static_cast<std::int64_t>(v.back());
      traps[std::to_string(seed)] = n;
      total_traps += n;
    }
  }

  Json seeds = Json::array();
  std::vector<std::int64_t> seen;
  for (const auto& r : all_rows) {
    if (std::find(seen.begin(), seen.end(), r.seed) == seen.end()) seen.push_back(r.seed);
  }
  std::sort(seen.begin(), seen.end());
  for (auto s : seen) seeds.push_back(s);

  out.report = {{"seeds", seeds},
                {"smoothing_window", window},
                {"final_fraction", final_fraction},
                {"final", metrics},
                {"correlation", corr},
                {"reward_traps", {{"total", total_traps}, {"per_seed", traps}}}};
  return out;
}

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "metric,seed,mean,std,n\n";
  for (const auto& r : rows) {
    out += r.metric + "," + r.seed + "," + format_double(r.mean) + "," +
           (r.std ? format_double(*r.std) : std::string()) + "," + std::to_string(r.n) + "\n";
  }
  return out;
}

// Reads every metrics.csv of a run directory (or of its immediate
// subdirectories, for a multi-seed sweep).
inline RunSummary summarize_run(const std::filesystem::path& dir, int window = 50) {
  std::vector<MetricRow> rows;
  std::map<std::int64_t, std::filesystem::path> owner;
  for (const auto& f : find_metrics_files(dir)) {
    auto part = load_metrics_csv(f.string());
    for (const auto& r : part) {
      auto [it, fresh] = owner.emplace(r.seed, f);
      if (!fresh && it->second != f) {
        throw std::invalid_argument("seed " + std::to_string(r.seed) + " appears in both '" +
                                    it->second.string() + "' and '" + f.string() + "'");
      }
    }
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (rows.empty()) throw std::invalid_argument("no metrics found in '" + dir.string() + "'");
  return summarize_rows(rows, window);
}

// Writes report.json, summary.csv and curves.csv into `out_dir`.
inline void write_summary(const RunSummary& s, const std::filesystem::path& out_dir) {
  auto put = [&](const char* name, const std::string& text) {
    std::ofstream f(out_dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + (out_dir / name).string() + "'");
    f << text;
  };
  put("report.json", s.report.dump(2) + "\n");
  put("summary.csv", summary_csv(s.rows));
  put("curves.csv", metrics_csv(s.curves));
}

}  // namespace relreward::analysis

#endif  // RELREWARD_ANALYSIS_HPP_
