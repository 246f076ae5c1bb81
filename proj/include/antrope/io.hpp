#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "antrope/engines.hpp"
#include "antrope/format.hpp"
#include "antrope/model.hpp"
#include "antrope/stats.hpp"

namespace antrope {

enum class OutputFormat { Csv, Json };

inline OutputFormat parse_output_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw std::invalid_argument("output format must be 'csv' or 'json', got '" + text + "'");
}

// Everything one simulation batch needs. Infinite-mean distributions fall
// outside the finite-mean hypotheses the diagnostics rely on, so they are
// gated behind the exploration flag and tag the output when used.
struct ExperimentConfig {
  explicit ExperimentConfig(ProcessSpec process) : spec(std::move(process)) {}

  ProcessSpec spec;
  std::uint64_t n_trajectories = 1;
  std::uint64_t master_seed = 0;
  std::uint64_t cap = kDefaultCap;
  std::uint64_t horizon = 100;
  std::string output_path;
  OutputFormat format = OutputFormat::Csv;
  unsigned parallelism = 1;
  bool strict = false;
  bool exploration = false;

  void validate() const {
    if (n_trajectories == 0) {
      throw std::invalid_argument("config: n_trajectories must be >= 1");
    }
    if (cap == 0 || horizon == 0 || horizon > cap) {
      throw std::invalid_argument("config: need 1 <= horizon <= cap");
    }
    if (!exploration &&
        (!spec.step_dist.has_finite_mean() || !spec.stretch_dist.has_finite_mean())) {
      throw std::domain_error(
          "config: infinite-mean distribution requires exploration mode (--explore)");
    }
  }
};

struct ExperimentResult {
  std::vector<TrajectoryRecord> records;
  MeanHittingTime mean;
  SurvivalCurve survival;
};

inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.records = run_batch(config.spec, config.n_trajectories, config.master_seed, config.cap,
                             config.parallelism);
  result.mean = mean_hitting_time(result.records, 0.95);
  result.survival = survival_curve(result.records, config.horizon);
  return result;
}

// One CSV table, then the summary as '#' comment lines so the file still
// loads as a single table. Censored rows carry the cap in the hitting_time
// column; the censored flag disambiguates.
inline std::string records_csv(const ExperimentResult& result, bool exploration) {
  std::string out = "substream_id,hitting_time,censored,final_fraction\n";
  for (const auto& r : result.records) {
    out += std::to_string(r.substream_id);
    out += ',';
    out += std::to_string(r.censored() ? r.cap : *r.hitting_time);
    out += ',';
    out += r.censored() ? "true" : "false";
    out += ',';
    out += format_double(r.final_fraction);
    out += '\n';
  }
  const auto stat = [&](double v) {
    return result.mean.defined ? format_double(v) : std::string("nan");
  };
  out += "# mean = " + stat(result.mean.mean) + "\n";
  out += "# ci_lo = " + stat(result.mean.lo) + "\n";
  out += "# ci_hi = " + stat(result.mean.hi) + "\n";
  out += "# n_censored = " + std::to_string(result.survival.n_censored) + "\n";
  out += "# survival =";
  for (double v : result.survival.values) {
    out += ' ';
    out += format_double(v);
  }
  out += '\n';
  if (exploration) out += "# exploration = true\n";
  return out;
}

inline nlohmann::json experiment_json(const ExperimentResult& result, bool exploration) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : result.records) {
    nlohmann::json row{{"substream_id", r.substream_id},
                       {"censored", r.censored()},
                       {"final_fraction", r.final_fraction}};
    if (r.censored()) {
      row["hitting_time"] = nullptr;
    } else {
      row["hitting_time"] = *r.hitting_time;
    }
    records.push_back(std::move(row));
  }

  nlohmann::json summary;
  if (result.mean.defined) {
    summary["mean"] = result.mean.mean;
    summary["ci_lo"] = result.mean.lo;
    summary["ci_hi"] = result.mean.hi;
  } else {
    summary["mean"] = nullptr;
    summary["ci_lo"] = nullptr;
    summary["ci_hi"] = nullptr;
  }
  summary["n_censored"] = result.survival.n_censored;
  summary["survival"] = result.survival.values;
  if (exploration) summary["exploration"] = true;

  return nlohmann::json{{"records", std::move(records)}, {"summary", std::move(summary)}};
}

inline std::string render_output(const ExperimentResult& result, const ExperimentConfig& config) {
  if (config.format == OutputFormat::Csv) {
    return records_csv(result, config.exploration);
  }
  return experiment_json(result, config.exploration).dump(2) + "\n";
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file for writing: " + path);
  }
  out << content;
  out.flush();
  if (!out) {
    throw std::runtime_error("failed while writing output file: " + path);
  }
}

}  // namespace antrope
