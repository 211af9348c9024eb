#include "helixseek/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace helixseek {

AscentReport ascent_condition(const SwimmerParams& swimmer, const FilterParams& filter) {
  AscentReport r;
  r.phase = transfer_gain_phase(filter, swimmer.omega()).phase;
  r.condition_value = swimmer.omega_perp_0 * swimmer.omega_perp_1 * std::sin(r.phase);
  r.is_ascent = r.condition_value < 0.0;
  return r;
}

double transient_cutoff(const SwimmerParams& swimmer, const FilterParams& filter) {
  return std::max({20.0 * filter.sigma1, 20.0 * filter.mu, 10.0 * swimmer.period()});
}

namespace {

std::size_t first_row_at_or_after(const Trajectory& traj, double t) {
  const auto it = std::lower_bound(traj.begin(), traj.end(), t,
                                   [](const TrajectoryRow& row, double v) { return row.t < v; });
  return static_cast<std::size_t>(it - traj.begin());
}

// Linear interpolation of f(row) at time t; rows are time-ordered.
template <typename F>
double interpolate(const Trajectory& traj, double t, F&& f) {
  std::size_t i = first_row_at_or_after(traj, t);
  if (i == 0) return f(traj.front());
  if (i >= traj.size()) return f(traj.back());
  const auto& a = traj[i - 1];
  const auto& b = traj[i];
  const double w = (t - a.t) / (b.t - a.t);
  return (1.0 - w) * f(a) + w * f(b);
}

}  // namespace

double post_transient_rate(const Trajectory& traj, const FieldSpec& field,
                           const SwimmerParams& swimmer, const FilterParams& filter) {
  const double t_start = traj.front().t + transient_cutoff(swimmer, filter);
  const std::size_t first = first_row_at_or_after(traj, t_start);
  if (traj.size() - first < 3) {
    throw std::invalid_argument("post_transient_rate: trajectory ends before the transient cutoff");
  }
  double st = 0.0, sc = 0.0, stt = 0.0, stc = 0.0;
  const double n = static_cast<double>(traj.size() - first);
  const double t_ref = traj[first].t;
  for (std::size_t i = first; i < traj.size(); ++i) {
    const double t = traj[i].t - t_ref;
    const double c = concentration(field, traj[i].avg.p_bar);
    st += t;
    sc += c;
    stt += t * t;
    stc += t * c;
  }
  return (n * stc - st * sc) / (n * stt - st * st);
}

AscentReport fit_gamma(const Trajectory& traj, const FieldSpec& field, const SwimmerParams& swimmer,
                       const FilterParams& filter) {
  if (swimmer.omega_par_0 != 0.0 || swimmer.omega_par_1 != 0.0) {
    throw std::invalid_argument("fit_gamma: requires a planar tuning (omega_par_0 = omega_par_1 = 0)");
  }
  if (traj.empty()) throw std::invalid_argument("fit_gamma: empty trajectory");
  AscentReport report = ascent_condition(swimmer, filter);

  const double period = swimmer.period();
  const double t_start = traj.front().t + transient_cutoff(swimmer, filter);
  const double t_stop = traj.back().t;
  const auto n_periods = static_cast<long>(std::floor((t_stop - t_start) / period + 1e-9));
  if (n_periods < 50) {
    throw std::invalid_argument("fit_gamma: needs >= 50 post-transient periods, got " +
                                std::to_string(std::max(n_periods, 0L)));
  }

  auto c_bar = [&](const TrajectoryRow& row) { return concentration(field, row.avg.p_bar); };
  auto g_bar = [&](const TrajectoryRow& row) { return norm(gradient(field, row.avg.p_bar)); };

  double sxy = 0.0, sxx = 0.0, syy = 0.0, max_grad = 0.0;
  std::vector<double> xs, ys;
  for (long k = 0; k < n_periods; ++k) {
    const double ta = t_start + static_cast<double>(k) * period;
    const double tb = ta + period;
    const double y = (interpolate(traj, tb, c_bar) - interpolate(traj, ta, c_bar)) / period;
    const double grad = 0.5 * (interpolate(traj, ta, g_bar) + interpolate(traj, tb, g_bar));
    max_grad = std::max(max_grad, grad);
    const double x = -report.condition_value * grad;
    xs.push_back(x);
    ys.push_back(y);
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  if (!(max_grad > 0.0)) throw std::invalid_argument("fit_gamma: zero gradient, nothing to fit");
  if (!(sxx > 0.0)) {
    throw std::invalid_argument("fit_gamma: ascent condition is zero, regression is degenerate");
  }

  const double gamma = sxy / sxx;
  double sr = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - gamma * xs[i];
    sr += e * e;
  }
  report.gamma_fit = gamma;
  report.residual = syy > 0.0 ? std::sqrt(sr / syy) : 0.0;
  return report;
}

Vec3 helix_axis_world(const AveragedPose& avg, const SwimmerParams& swimmer) {
  const double orient = swimmer.omega_par_0 < 0.0 ? -1.0 : 1.0;
  return avg.R_bar * (orient * swimmer.axis());
}

std::vector<AngleSample> alignment_angle_series(const Trajectory& traj, const FieldSpec& field,
                                                const SwimmerParams& swimmer) {
  std::vector<AngleSample> out;
  out.reserve(traj.size());
  for (const auto& row : traj) {
    const Vec3 g = gradient(field, row.avg.p_bar);
    const double gn = norm(g);
    if (!(gn > 0.0)) continue;
    const Vec3 axis = helix_axis_world(row.avg, swimmer);
    const double c = std::clamp(dot(axis, g) / (norm(axis) * gn), -1.0, 1.0);
    out.push_back({row.t, std::acos(c)});
  }
  return out;
}

namespace {

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
}

}  // namespace

AlignmentSummary summarize_alignment(const std::vector<AngleSample>& series) {
  AlignmentSummary out;
  out.samples = series.size();
  if (series.empty()) return out;
  const std::size_t k = std::max<std::size_t>(1, series.size() / 5);
  std::vector<double> first, last;
  for (std::size_t i = 0; i < k; ++i) {
    first.push_back(series[i].angle);
    last.push_back(series[series.size() - k + i].angle);
  }
  out.median_first = median(std::move(first));
  out.median_last = median(std::move(last));
  out.improving = out.median_last < out.median_first;
  return out;
}

SteeringContrast steering_response_contrast(const Trajectory& traj, const SwimmerParams& swimmer,
                                            double t_begin, double t_end) {
  const double period = swimmer.period();
  const double freq = swimmer.omega();
  SteeringContrast out;
  double sum_dec = 0.0, sum_inc = 0.0;
  std::optional<double> prev_mean;

  for (double ta = t_begin; ta + period <= t_end + 1e-12; ta += period) {
    const std::size_t lo = first_row_at_or_after(traj, ta);
    const std::size_t hi = first_row_at_or_after(traj, ta + period);
    if (hi <= lo + 3) break;
    std::vector<double> ts, etas;
    double s_sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      ts.push_back(traj[i].t);
      etas.push_back(traj[i].eta);
      s_sum += traj[i].s;
    }
    const double s_mean = s_sum / static_cast<double>(hi - lo);
    const double amp = harmonic_fit(ts, etas, freq).amplitude;
    if (prev_mean) {
      if (s_mean <= *prev_mean) {
        sum_dec += amp;
        ++out.periods_decreasing;
      } else {
        sum_inc += amp;
        ++out.periods_increasing;
      }
    }
    prev_mean = s_mean;
  }
  if (out.periods_decreasing > 0) out.mean_amplitude_decreasing = sum_dec / out.periods_decreasing;
  if (out.periods_increasing > 0) out.mean_amplitude_increasing = sum_inc / out.periods_increasing;
  out.ratio = out.mean_amplitude_increasing > 0.0
                  ? out.mean_amplitude_decreasing / out.mean_amplitude_increasing
                  : 0.0;
  return out;
}

}  // namespace helixseek
