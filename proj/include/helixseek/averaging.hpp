#pragma once

// Checks of the averaged closed-loop behavior: the planar ascent condition,
// the fitted gradient-ascent rate constant, helix-axis alignment and the
// on/off steering contrast.

#include <optional>
#include <vector>

#include "helixseek/simulation.hpp"

namespace helixseek {

struct AscentReport {
  double condition_value{0.0};  ///< w_perp_0 * w_perp_1 * sin(phi)
  double phase{0.0};            ///< filter phase phi at the helix frequency
  bool is_ascent{false};        ///< condition_value < 0
  std::optional<double> gamma_fit;
  double residual{0.0};
};

AscentReport ascent_condition(const SwimmerParams& swimmer, const FilterParams& filter);

/// Start-up interval excluded from every fit: max(20 sigma1, 20 mu, 10 periods).
double transient_cutoff(const SwimmerParams& swimmer, const FilterParams& filter);

/// Least-squares slope of c(p_bar(t)) over the post-transient rows.
double post_transient_rate(const Trajectory& traj, const FieldSpec& field,
                           const SwimmerParams& swimmer, const FilterParams& filter);

/// Fits gamma in  d/dt c(p_bar) = -gamma w_perp_0 w_perp_1 sin(phi) |grad c(p_bar)|
/// using one-period difference quotients of c(p_bar) after the transient.
/// residual = rms(y - gamma x) / rms(y).
/// Throws std::invalid_argument for non-planar tunings, fewer than 50
/// post-transient periods, or a vanishing gradient.
AscentReport fit_gamma(const Trajectory& traj, const FieldSpec& field, const SwimmerParams& swimmer,
                       const FilterParams& filter);

/// Direction of average travel in the fixed frame: R_bar applied to the helix
/// axis, oriented along the mean body velocity (sign of w_par_0).
Vec3 helix_axis_world(const AveragedPose& avg, const SwimmerParams& swimmer);

struct AngleSample {
  double t{0.0};
  double angle{0.0};
};

/// Angle between helix_axis_world and grad c(p_bar) per row; rows with zero
/// gradient are omitted.
std::vector<AngleSample> alignment_angle_series(const Trajectory& traj, const FieldSpec& field,
                                                const SwimmerParams& swimmer);

struct AlignmentSummary {
  std::size_t samples{0};
  double median_first{0.0};  ///< median angle over the first 20% of samples
  double median_last{0.0};   ///< median angle over the last 20% of samples
  bool improving{false};     ///< median_last < median_first
};

AlignmentSummary summarize_alignment(const std::vector<AngleSample>& series);

struct SteeringContrast {
  double mean_amplitude_decreasing{0.0};
  double mean_amplitude_increasing{0.0};
  double ratio{0.0};
  int periods_decreasing{0};
  int periods_increasing{0};
};

/// Splits [t_begin, t_end] into helix periods and fits the eta harmonic
/// amplitude at the helix frequency in each. A period counts as decreasing
/// when its mean stimulus does not exceed that of the previous period.
SteeringContrast steering_response_contrast(const Trajectory& traj, const SwimmerParams& swimmer,
                                            double t_begin, double t_end);

}  // namespace helixseek
