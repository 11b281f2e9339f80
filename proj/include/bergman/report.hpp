#pragma once

// Experiment reports: numeric series, spectra, verdicts, and their JSON / CSV forms.

#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bergman/error.hpp"

namespace bergman {

enum class Verdict { decays_to_zero, bounded_away_from_zero, inconclusive };
enum class Prediction { non_compact, compact_consistent };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::decays_to_zero: return "decays_to_zero";
    case Verdict::bounded_away_from_zero: return "bounded_away_from_zero";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}
inline const char* to_string(Prediction p) {
  return p == Prediction::non_compact ? "non_compact" : "compact_consistent";
}

/// The verdict a prediction calls for.
inline Verdict expected_verdict(Prediction p) {
  return p == Prediction::non_compact ? Verdict::bounded_away_from_zero : Verdict::decays_to_zero;
}

struct SeriesPoint {
  double index = 0.0;
  double value = 0.0;
  double error_bound = 0.0;
};

struct Series {
  std::string name;
  std::vector<SeriesPoint> points;

  void push(double index, double value, double error_bound = 0.0) {
    points.push_back({index, value, error_bound});
  }
};

struct Spectrum {
  int truncation = 0;
  std::string kind;  // "eigenvalues" or "singular_values"
  std::vector<double> values;  // descending
};

struct ExperimentReport {
  std::string experiment;
  std::deque<Series> series;  // deque: add_series references stay valid
  std::vector<Spectrum> spectra;
  std::map<std::string, double> scalars;
  std::map<std::string, double> tolerances;
  std::map<std::string, std::string> provenance;
  std::map<std::string, double> runtimes_s;
  std::vector<std::string> notes;
  std::optional<Verdict> verdict;
  std::optional<Prediction> prediction;
  std::optional<bool> agreement;
  bool passed = false;
  nlohmann::json config;  // effective configuration, filled by the runner

  Series& add_series(const std::string& name) {
    series.push_back({name, {}});
    return series.back();
  }
  const Series* find_series(const std::string& name) const {
    for (const auto& s : series)
      if (s.name == name) return &s;
    return nullptr;
  }
};

inline nlohmann::json to_json(const ExperimentReport& r) {
  using nlohmann::json;
  json j;
  j["experiment"] = r.experiment;
  j["passed"] = r.passed;
  j["verdict"] = r.verdict ? json(to_string(*r.verdict)) : json(nullptr);
  j["theorem_prediction"] = r.prediction ? json(to_string(*r.prediction)) : json(nullptr);
  j["agreement"] = r.agreement ? json(*r.agreement) : json(nullptr);
  j["series"] = json::object();
  for (const auto& s : r.series) {
    json pts = json::array();
    for (const auto& p : s.points)
      pts.push_back({{"index", p.index}, {"value", p.value}, {"error_bound", p.error_bound}});
    j["series"][s.name] = pts;
  }
  j["spectra"] = json::array();
  for (const auto& s : r.spectra)
    j["spectra"].push_back({{"truncation", s.truncation}, {"kind", s.kind}, {"values", s.values}});
  j["scalars"] = r.scalars;
  j["tolerances"] = r.tolerances;
  j["provenance"] = r.provenance;
  j["runtimes_s"] = r.runtimes_s;
  j["notes"] = r.notes;
  j["config"] = r.config;
  return j;
}

/// CSV text for one series: header "index,value,error_bound", full double precision.
inline std::string to_csv(const Series& s) {
  std::ostringstream os;
  os.precision(17);
  os << "index,value,error_bound\n";
  for (const auto& p : s.points) os << p.index << ',' << p.value << ',' << p.error_bound << '\n';
  return os.str();
}

enum class OutputFormat { json, csv, both };

/// Writes report.json and/or one <series>.csv per series into dir. Returns the paths written.
inline std::vector<std::filesystem::path> write_report(const ExperimentReport& r,
                                                       const std::filesystem::path& dir,
                                                       OutputFormat format) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + p.string());
    out << text;
    written.push_back(p);
  };
  if (format != OutputFormat::csv) emit(dir / "report.json", to_json(r).dump(2) + "\n");
  if (format != OutputFormat::json)
    for (const auto& s : r.series) emit(dir / (s.name + ".csv"), to_csv(s));
  return written;
}

}  // namespace bergman
