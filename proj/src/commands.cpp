#include "helixseek/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "helixseek/config.hpp"
#include "helixseek/trajectory_io.hpp"

namespace helixseek {

namespace fs = std::filesystem;
using nlohmann::json;

const char* version() { return HELIXSEEK_VERSION; }

namespace {

using Clock = std::chrono::steady_clock;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json arrival_json(const ArrivalMetrics& m) {
  return {{"hit", m.hit}, {"t_hit", m.t_hit}, {"min_dist", m.min_dist}, {"final_c", m.final_c}};
}

json ascent_json(const AscentReport& r) {
  return {{"condition_value", r.condition_value},
          {"phase", r.phase},
          {"is_ascent", r.is_ascent},
          {"gamma_fit", optional_number(r.gamma_fit)},
          {"residual", r.residual}};
}

json metrics_json(const SimConfig& config, const RunResult& result) {
  json j;
  j["rows"] = result.trajectory.size();
  j["expected_rows"] = expected_row_count(config.sim);
  j["aborted"] = !result.ok();
  if (!result.ok()) {
    j["abort_message"] = *result.abort_message;
    j["abort_step"] = result.abort_step;
  }
  j["arrival"] = arrival_json(arrival_metrics(result.trajectory, config.field));
  j["ascent"] = ascent_json(ascent_condition(config.swimmer, config.filter));
  j["warnings"] = config.warnings();
  return j;
}

void write_manifest(const fs::path& out_dir, const std::string& command, const SimConfig& config,
                    const std::vector<std::string>& outputs, double wall_seconds) {
  json j;
  j["command"] = command;
  j["artifact_version"] = version();
  j["config_digest"] = sha256_hex(canonical_dump(config));
  j["seed"] = config.noise.seed;
  j["outputs"] = outputs;
  j["wall_clock_seconds"] = wall_seconds;
  write_json(out_dir / "manifest.json", j);
}

void report_abort(const SimConfig& config, const RunResult& result, std::ostream& err) {
  err << "error: numerical abort at step " << result.abort_step << " (row "
      << result.abort_step / config.sim.record_stride << "): " << *result.abort_message << '\n';
}

void report_warnings(const SimConfig& config, std::ostream& err) {
  for (const auto& w : config.warnings()) err << "warning: " << w << '\n';
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  SimConfig config;
  try {
    config = load_config(opts.config);
    if (opts.seed) config.noise.seed = *opts.seed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  }
  report_warnings(config, err);
  try {
    ensure_dir(opts.out_dir);
    const RunResult result = run(config);
    write_trajectory_csv(result.trajectory, opts.out_dir / "trajectory.csv");
    write_json(opts.out_dir / "metrics.json", metrics_json(config, result));
    write_manifest(opts.out_dir, "simulate", config, {"trajectory.csv", "metrics.json", "manifest.json"},
                   seconds_since(start));
    out << "rows: " << result.trajectory.size() << '\n';
    if (!result.ok()) {
      report_abort(config, result, err);
      return kExitFailure;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  }
  return kExitOk;
}

std::vector<SweepAxis> parse_sweep_spec(const json& spec) {
  if (!spec.is_object() || !spec.contains("grid") || !spec["grid"].is_array()) {
    throw ConfigError("grid", "sweep spec must be an object with a \"grid\" array");
  }
  for (const auto& [key, value] : spec.items()) {
    if (key != "grid") throw ConfigError(key, "unknown sweep spec key");
  }
  std::vector<SweepAxis> axes;
  for (std::size_t i = 0; i < spec["grid"].size(); ++i) {
    const json& entry = spec["grid"][i];
    const std::string where = "grid." + std::to_string(i);
    if (!entry.is_object() || !entry.contains("path") || !entry["path"].is_string() ||
        !entry.contains("values") || !entry["values"].is_array() || entry["values"].empty()) {
      throw ConfigError(where, "expected {\"path\": string, \"values\": non-empty array}");
    }
    for (const auto& [key, value] : entry.items()) {
      if (key != "path" && key != "values") throw ConfigError(where + "." + key, "unknown key");
    }
    SweepAxis axis;
    axis.path = entry["path"].get<std::string>();
    for (const auto& v : entry["values"]) {
      if (!v.is_number()) throw ConfigError(where + ".values", "values must be numbers");
      axis.values.push_back(v.get<double>());
    }
    axes.push_back(std::move(axis));
  }
  if (axes.empty()) throw ConfigError("grid", "empty grid");
  return axes;
}

std::vector<SweepPoint> expand_grid(const json& base, const std::vector<SweepAxis>& axes) {
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.values.size();
  std::vector<SweepPoint> points;
  points.reserve(total);
  for (std::size_t index = 0; index < total; ++index) {
    SweepPoint point;
    point.index = index;
    point.values.resize(axes.size());
    std::size_t rest = index;
    for (std::size_t k = axes.size(); k-- > 0;) {
      point.values[k] = axes[k].values[rest % axes[k].values.size()];
      rest /= axes[k].values.size();
    }
    json j = base;
    for (std::size_t k = 0; k < axes.size(); ++k) set_numeric_leaf(j, axes[k].path, point.values[k]);
    point.config = config_from_json(j);
    points.push_back(std::move(point));
  }
  return points;
}

std::vector<SweepPointResult> run_sweep(const std::vector<SweepPoint>& points, unsigned parallelism,
                                        const std::optional<fs::path>& out_dir) {
  std::vector<SweepPointResult> results(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        const SimConfig& config = points[i].config;
        const RunResult result = run(config);
        SweepPointResult& r = results[i];
        r.rows = result.trajectory.size();
        r.aborted = !result.ok();
        r.arrival = arrival_metrics(result.trajectory, config.field);
        r.ascent = ascent_condition(config.swimmer, config.filter);
        if (out_dir) {
          char name[32];
          std::snprintf(name, sizeof name, "point_%04zu", points[i].index);
          const fs::path dir = *out_dir / name;
          ensure_dir(dir);
          save_config(config, dir / "config.json");
          write_trajectory_csv(result.trajectory, dir / "trajectory.csv");
          write_json(dir / "metrics.json", metrics_json(config, result));
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(points.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::string sweep_summary_csv(const std::vector<SweepAxis>& axes, const std::vector<SweepPoint>& points,
                              const std::vector<SweepPointResult>& results) {
  std::ostringstream s;
  s << "index";
  for (const auto& a : axes) s << ',' << a.path;
  s << ",rows,aborted,hit,t_hit,min_dist,final_c,condition_value,is_ascent\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& r = results[i];
    s << points[i].index;
    for (double v : points[i].values) s << ',' << format_double(v);
    s << ',' << r.rows << ',' << (r.aborted ? 1 : 0) << ',' << (r.arrival.hit ? 1 : 0) << ','
      << format_double(r.arrival.t_hit) << ',' << format_double(r.arrival.min_dist) << ','
      << format_double(r.arrival.final_c) << ',' << format_double(r.ascent.condition_value) << ','
      << (r.ascent.is_ascent ? 1 : 0) << '\n';
  }
  return s.str();
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  std::vector<SweepAxis> axes;
  std::vector<SweepPoint> points;
  SimConfig base;
  try {
    base = load_config(opts.config);
    if (opts.seed) base.noise.seed = *opts.seed;
    std::ifstream in(opts.sweep_spec, std::ios::binary);
    if (!in) throw ConfigError("", "cannot read sweep spec " + opts.sweep_spec.string());
    json spec;
    try {
      spec = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("", std::string("malformed sweep spec: ") + e.what());
    }
    axes = parse_sweep_spec(spec);
    points = expand_grid(config_to_json(base), axes);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  }
  report_warnings(base, err);

  std::vector<SweepPointResult> results;
  try {
    ensure_dir(opts.out_dir);
    results = run_sweep(points, opts.parallelism, opts.out_dir);
    write_text(opts.out_dir / "summary.csv", sweep_summary_csv(axes, points, results));
    std::vector<std::string> outputs{"summary.csv", "manifest.json"};
    write_manifest(opts.out_dir, "sweep", base, outputs, seconds_since(start));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  out << "points: " << points.size() << '\n';
  const bool any_abort =
      std::any_of(results.begin(), results.end(), [](const auto& r) { return r.aborted; });
  if (any_abort) {
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i].aborted) err << "error: numerical abort in point " << i << '\n';
    }
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err) {
  SimConfig config;
  Trajectory traj;
  try {
    if (opts.kind != "ascent" && opts.kind != "alignment" && opts.kind != "quasi-steady") {
      throw std::invalid_argument("unknown analysis kind '" + opts.kind +
                                  "' (expected ascent, alignment or quasi-steady)");
    }
    config = load_config(opts.config);
    traj = read_trajectory_csv(opts.trajectory, config.swimmer);
  } catch (const CsvError& e) {
    err << "error: " << opts.trajectory.string() << ": " << e.what() << '\n';
    return kExitUserError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  }

  try {
    ensure_dir(opts.out_dir);
    if (opts.kind == "ascent") {
      const AscentReport report = fit_gamma(traj, config.field, config.swimmer, config.filter);
      write_json(opts.out_dir / "ascent.json", ascent_json(report));
      out << "condition_value: " << report.condition_value << "\ngamma_fit: " << *report.gamma_fit
          << "\nresidual: " << report.residual << '\n';
    } else if (opts.kind == "alignment") {
      const auto series = alignment_angle_series(traj, config.field, config.swimmer);
      write_alignment_csv(series, opts.out_dir / "alignment_series.csv");
      const AlignmentSummary summary = summarize_alignment(series);
      write_json(opts.out_dir / "alignment.json", {{"samples", summary.samples},
                                                   {"median_first", summary.median_first},
                                                   {"median_last", summary.median_last},
                                                   {"improving", summary.improving}});
      out << "median_first: " << summary.median_first << "\nmedian_last: " << summary.median_last
          << "\nimproving: " << (summary.improving ? "true" : "false") << '\n';
    } else {
      const double cutoff = traj.front().t + transient_cutoff(config.swimmer, config.filter);
      const double span = traj.back().t - cutoff;
      const bool skip_transient = span >= 5.0 * config.swimmer.period();
      std::vector<double> ts, etas;
      for (const auto& row : traj) {
        if (skip_transient && row.t < cutoff) continue;
        ts.push_back(row.t);
        etas.push_back(row.eta);
      }
      const HarmonicFit fit = quasi_steady_fit(ts, etas, config.swimmer.omega());
      write_json(opts.out_dir / "quasi_steady.json", {{"bias", fit.bias},
                                                      {"amplitude", fit.amplitude},
                                                      {"phase", fit.phase},
                                                      {"freq", config.swimmer.omega()},
                                                      {"t_begin", ts.front()},
                                                      {"t_end", ts.back()}});
      out << "bias: " << fit.bias << "\namplitude: " << fit.amplitude << "\nphase: " << fit.phase
          << '\n';
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_reproduce_fig2(const Fig2Options& opts, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  SimConfig config;
  try {
    config = opts.config ? load_config(*opts.config) : fig2_config();
    if (opts.planar) make_planar(config);
    if (opts.flip_omega_perp_1) config.swimmer.omega_perp_1 = -config.swimmer.omega_perp_1;
    if (opts.seed) config.noise.seed = *opts.seed;
    config.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  }
  report_warnings(config, err);

  ArrivalMetrics arrival;
  try {
    ensure_dir(opts.out_dir);
    const RunResult result = run(config);
    save_config(config, opts.out_dir / "config.json");
    write_trajectory_csv(result.trajectory, opts.out_dir / "trajectory.csv");
    write_eta_vs_stimulus_csv(result.trajectory, opts.out_dir / "eta_vs_stimulus.csv");
    write_path_svg(result.trajectory, opts.out_dir / "trajectory.svg");
    write_json(opts.out_dir / "metrics.json", metrics_json(config, result));
    write_manifest(opts.out_dir, "reproduce-fig2", config,
                   {"config.json", "trajectory.csv", "eta_vs_stimulus.csv", "trajectory.svg",
                    "metrics.json", "manifest.json"},
                   seconds_since(start));
    if (!result.ok()) {
      report_abort(config, result, err);
      return kExitFailure;
    }
    arrival = arrival_metrics(result.trajectory, config.field);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  const double l0 = config.field.l0;
  out << "hit: " << (arrival.hit ? "true" : "false") << '\n'
      << "t_hit: " << format_double(arrival.t_hit) << '\n'
      << "min_dist: " << format_double(arrival.min_dist) << " (" << arrival.min_dist / l0
      << " l0)\n"
      << "final_c: " << format_double(arrival.final_c) << '\n';
  if (!arrival.hit) {
    err << "error: swimmer did not reach the source within t_end\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace helixseek
