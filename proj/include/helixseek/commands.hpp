#pragma once

// Command layer behind the helixseek executable. Every command writes only
// under its output directory and returns a process exit code:
//   0 success, 2 user or configuration error, 3 numerical or regression failure.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "helixseek/averaging.hpp"
#include "helixseek/simulation.hpp"

namespace helixseek {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 2;
inline constexpr int kExitFailure = 3;

const char* version();

struct SimulateOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
};

struct SweepOptions {
  std::filesystem::path config;
  std::filesystem::path sweep_spec;
  std::filesystem::path out_dir;
  unsigned parallelism{1};
  std::optional<std::uint64_t> seed;
};

struct AnalyzeOptions {
  std::filesystem::path trajectory;
  std::filesystem::path config;
  std::string kind;  ///< ascent | alignment | quasi-steady
  std::filesystem::path out_dir;
};

struct Fig2Options {
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> config;  ///< defaults to the built-in scenario
  bool planar{false};
  bool flip_omega_perp_1{false};
  std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);
int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err);
int cmd_reproduce_fig2(const Fig2Options& opts, std::ostream& out, std::ostream& err);

// Sweep building blocks, exposed for tests and benchmarks.

/// One grid axis: a dotted numeric config path and its values.
struct SweepAxis {
  std::string path;
  std::vector<double> values;
};

/// Parses {"grid": [{"path": "...", "values": [...]}, ...]}.
std::vector<SweepAxis> parse_sweep_spec(const nlohmann::json& spec);

struct SweepPoint {
  std::size_t index{0};
  std::vector<double> values;  ///< one per axis
  SimConfig config;
};

/// Cartesian product with the last axis varying fastest. Throws ConfigError for
/// unknown paths or invalid resulting configs.
std::vector<SweepPoint> expand_grid(const nlohmann::json& base, const std::vector<SweepAxis>& axes);

struct SweepPointResult {
  std::size_t rows{0};
  bool aborted{false};
  ArrivalMetrics arrival;
  AscentReport ascent;
};

/// Runs every point on `parallelism` share-nothing workers. When out_dir is
/// set, point k writes config.json, trajectory.csv and metrics.json into
/// out_dir/point_kkkk. Results are indexed by grid position.
std::vector<SweepPointResult> run_sweep(const std::vector<SweepPoint>& points, unsigned parallelism,
                                        const std::optional<std::filesystem::path>& out_dir);

std::string sweep_summary_csv(const std::vector<SweepAxis>& axes,
                              const std::vector<SweepPoint>& points,
                              const std::vector<SweepPointResult>& results);

}  // namespace helixseek
