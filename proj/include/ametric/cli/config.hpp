#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ametric/core.hpp"
#include "ametric/spaces.hpp"

namespace ametric::cli {

/// Malformed or incomplete experiment config. `line` is 1-based in the source text.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line) : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct SpaceConfig {
  std::string kind = "absdiff";  // absdiff | lifted
  int t = 3;
  std::size_t d = 1;
  /// Box bounds for absdiff; empty means all of R^d.
  Point lo;
  Point hi;
  /// Base metric table for lifted spaces.
  MetricTable table;
};

struct SamplingConfig {
  std::uint64_t seed = 0;
  std::size_t n_pairs = 1000;
  std::size_t n_triples = 1000;
  std::size_t n_tuples = 1000;
  double window = 10.0;
};

struct ToleranceConfig {
  double check_tol = 1e-9;
  double eps = 1e-12;
  std::optional<double> bound_eps;
  double eq_tol = 1e-12;
};

struct SolverConfig {
  Point x0;
  std::size_t max_iter = 10'000;
  /// Skips implicit classification in the solve command when present.
  std::optional<double> delta;
  /// Uniqueness probe starts; defaulted from the seed when empty.
  std::vector<Point> starts;
};

struct OutputConfig {
  std::string csv_path = "trace.csv";
  /// Empty means "<command>_report.json".
  std::string json_path;
};

struct ExperimentConfig {
  SpaceConfig space;
  MapSpec map;
  SamplingConfig sampling;
  ToleranceConfig tolerances;
  SolverConfig solver;
  OutputConfig outputs;
};

/// Parse a JSON config. `seed_override`, when set, replaces (or supplies) sampling.seed.
/// Throws ConfigError anchored to the offending line.
ExperimentConfig parse_config(const std::string& text,
                              std::optional<std::uint64_t> seed_override = std::nullopt);

/// The config with every default filled in.
nlohmann::ordered_json to_json(const ExperimentConfig& config);

}  // namespace ametric::cli
