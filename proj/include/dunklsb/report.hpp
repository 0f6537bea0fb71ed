#pragma once

// Verification suites over a (k, t) grid and their machine-readable report.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace dunklsb {

struct CheckRecord {
  std::string check_id;
  std::map<std::string, std::string> params;
  std::vector<double> value;
  std::vector<double> reference;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tol = 0.0;
  std::string mode = "abs";  // "abs", "rel" or "either"
  bool pass = false;
  double runtime_ms = 0.0;
  std::string note;

  /// Sets pass from the errors, tolerance and mode.
  void decide();
};

struct ReportSummary {
  long total = 0;
  long passed = 0;
  long failed = 0;
};

struct VerificationReport {
  std::vector<CheckRecord> records;

  ReportSummary summary() const;
  /// Sort by check_id, then by params.
  void sort();
  nlohmann::ordered_json to_json(bool with_runtime = true) const;
  std::string to_csv() const;
};

struct GridPoint {
  std::vector<double> k;
  double t = 1.0;
};

struct RunConfig {
  std::vector<std::string> suites{"all"};
  std::vector<std::vector<double>> k_grid{{0.0}, {0.5}, {1.0}, {2.5}, {0.5, 1.5}};
  std::vector<double> t_grid{0.5, 1.0, 2.0};
  int nodes = 80;
  int degree = 40;
  int basis = 10;
  double tol_scale = 1.0;
  std::uint64_t seed = 42;
  int kernel_samples = 1000;
  int probe_nodes = 600;
  std::optional<std::filesystem::path> cache_dir;

  std::vector<GridPoint> points() const;
  /// Throws std::invalid_argument on an unusable configuration.
  void validate() const;
};

/// Reads a configuration from JSON; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);

/// Known suite names.
const std::vector<std::string>& suite_names();

VerificationReport run_suite(const RunConfig& config);

/// Individual suites for one grid point.
void kernel_suite(const RunConfig& cfg, const GridPoint& p, VerificationReport& out);
void quadrature_suite(const RunConfig& cfg, const GridPoint& p, VerificationReport& out);
void spaces_suite(const RunConfig& cfg, const GridPoint& p, VerificationReport& out);
void transforms_suite(const RunConfig& cfg, const GridPoint& p, VerificationReport& out);
void polar_suite(const RunConfig& cfg, const GridPoint& p, VerificationReport& out);

}  // namespace dunklsb
