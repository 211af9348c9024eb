#pragma once

// Closed-loop swimmer: the 15-dimensional state (p, R, zeta1, zeta2, rho)
// integrated jointly with a fixed-step classical Runge-Kutta scheme under the
// stimulus s(t) = c(p(t)) + noise.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "helixseek/fields.hpp"
#include "helixseek/kinematics.hpp"
#include "helixseek/signaling.hpp"

namespace helixseek {

struct SimSettings {
  double dt{1e-3};
  double t_end{1.0};
  std::uint64_t record_stride{1};
  std::uint64_t renorm_stride{1};
};

struct SimConfig {
  SwimmerParams swimmer;
  FilterParams filter;
  FieldSpec field;
  NoiseSpec noise;
  SimSettings sim;
  Pose init_pose;
  FilterState init_filter;

  /// Throws std::invalid_argument naming the offending key.
  void validate() const;
  /// Non-fatal diagnostics, e.g. dt coarser than period / 50.
  std::vector<std::string> warnings() const;
};

struct SimState {
  std::uint64_t step_index{0};
  Pose pose;
  FilterState filter;
};

struct TrajectoryRow {
  double t{0.0};
  Pose pose;
  double s{0.0};
  FilterState filter;
  double eta{0.0};
  AveragedPose avg;
};

using Trajectory = std::vector<TrajectoryRow>;

class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(std::uint64_t step_index, const std::string& what)
      : std::runtime_error(what), step_index_(step_index) {}
  std::uint64_t step_index() const { return step_index_; }

 private:
  std::uint64_t step_index_;
};

/// One dt advance. The stimulus noise term is held constant across the stages
/// of the step. R is re-orthonormalized when the new step index is a multiple of
/// renorm_stride, and rho is clamped to rho_max. Throws NumericalAbort on a
/// non-finite or non-positive-gain result.
SimState step(const SimState& state, const SimConfig& config, double noise = 0.0);

/// Number of integrator steps for the configured horizon.
std::uint64_t step_count(const SimSettings& sim);
/// floor(t_end / (dt * record_stride)) + 1
std::uint64_t expected_row_count(const SimSettings& sim);

struct RunResult {
  Trajectory trajectory;
  std::optional<std::string> abort_message;
  std::uint64_t abort_step{0};

  bool ok() const { return !abort_message.has_value(); }
};

/// Deterministic given the config (including the noise seed). The trajectory is
/// never empty; on abort it ends with the last good state.
RunResult run(const SimConfig& config);

/// Builds a trajectory row, including the averaged frame, from a state.
TrajectoryRow make_row(const SimState& state, const SimConfig& config, double noise);

struct ArrivalMetrics {
  bool hit{false};
  double t_hit{0.0};
  double min_dist{0.0};
  double final_c{0.0};
};

/// hit iff some row lies within clamp_radius of the source; t_hit is the first
/// such time, otherwise the final time.
ArrivalMetrics arrival_metrics(const Trajectory& traj, const FieldSpec& field);

}  // namespace helixseek
