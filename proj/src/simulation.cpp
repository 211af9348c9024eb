#include "helixseek/simulation.hpp"

#include <cmath>
#include <sstream>

namespace helixseek {

void SimConfig::validate() const {
  swimmer.validate();
  filter.validate();
  field.validate();
  noise.validate();
  if (!std::isfinite(sim.dt) || !(sim.dt > 0.0)) throw std::invalid_argument("sim.dt must be > 0");
  if (!std::isfinite(sim.t_end) || !(sim.t_end >= sim.dt)) {
    throw std::invalid_argument("sim.t_end must be >= sim.dt");
  }
  if (sim.record_stride < 1) throw std::invalid_argument("sim.record_stride must be >= 1");
  if (sim.renorm_stride < 1) throw std::invalid_argument("sim.renorm_stride must be >= 1");
  if (!is_finite(init_pose.p)) throw std::invalid_argument("init.p must be finite");
  if (!is_finite(init_pose.R) || orthonormality_error(init_pose.R) > 1e-9 ||
      determinant(init_pose.R) <= 0.0) {
    throw std::invalid_argument("init.R must be a rotation matrix");
  }
  if (!std::isfinite(init_filter.zeta1) || !std::isfinite(init_filter.zeta2)) {
    throw std::invalid_argument("init.zeta1/zeta2 must be finite");
  }
  if (!(init_filter.rho > 0.0) || !(init_filter.rho <= filter.rho_max)) {
    throw std::invalid_argument("init.rho must be in (0, filter.rho_max]");
  }
}

std::vector<std::string> SimConfig::warnings() const {
  std::vector<std::string> out;
  if (sim.dt > swimmer.period() / 50.0) {
    std::ostringstream msg;
    msg << "sim.dt = " << sim.dt << " exceeds period/50 = " << swimmer.period() / 50.0;
    out.push_back(msg.str());
  }
  return out;
}

namespace {

struct Tangent {
  Vec3 dp;
  Mat3 dR;
  FilterState df;
};

Tangent rhs(const Pose& pose, const FilterState& f, const SimConfig& cfg, double noise) {
  const double s = concentration(cfg.field, pose.p) + noise;
  const double eta = filter_output(f);
  const BodyVelocity vel = body_velocity(cfg.swimmer, eta);
  const PoseRate pr = pose_derivative(pose, vel.linear, vel.angular);
  return {pr.dp, pr.dR, filter_derivative(f, cfg.filter, s)};
}

void advance(const SimState& base, const Tangent& k, double h, Pose& pose, FilterState& f) {
  pose.p = base.pose.p + h * k.dp;
  pose.R = base.pose.R + h * k.dR;
  f.zeta1 = base.filter.zeta1 + h * k.df.zeta1;
  f.zeta2 = base.filter.zeta2 + h * k.df.zeta2;
  f.rho = base.filter.rho + h * k.df.rho;
}

}  // namespace

SimState step(const SimState& state, const SimConfig& config, double noise) {
  const double h = config.sim.dt;
  Pose pose;
  FilterState f;

  const Tangent k1 = rhs(state.pose, state.filter, config, noise);
  advance(state, k1, 0.5 * h, pose, f);
  const Tangent k2 = rhs(pose, f, config, noise);
  advance(state, k2, 0.5 * h, pose, f);
  const Tangent k3 = rhs(pose, f, config, noise);
  advance(state, k3, h, pose, f);
  const Tangent k4 = rhs(pose, f, config, noise);

  const double w = h / 6.0;
  SimState next;
  next.step_index = state.step_index + 1;
  next.pose.p = state.pose.p + w * (k1.dp + 2.0 * (k2.dp + k3.dp) + k4.dp);
  next.pose.R = state.pose.R + w * (k1.dR + 2.0 * (k2.dR + k3.dR) + k4.dR);
  next.filter.zeta1 =
      state.filter.zeta1 + w * (k1.df.zeta1 + 2.0 * (k2.df.zeta1 + k3.df.zeta1) + k4.df.zeta1);
  next.filter.zeta2 =
      state.filter.zeta2 + w * (k1.df.zeta2 + 2.0 * (k2.df.zeta2 + k3.df.zeta2) + k4.df.zeta2);
  next.filter.rho =
      state.filter.rho + w * (k1.df.rho + 2.0 * (k2.df.rho + k3.df.rho) + k4.df.rho);

  if (!is_finite(next.pose.p) || !is_finite(next.pose.R) || !std::isfinite(next.filter.zeta1) ||
      !std::isfinite(next.filter.zeta2) || !std::isfinite(next.filter.rho)) {
    throw NumericalAbort(next.step_index, "non-finite state at step " +
                                              std::to_string(next.step_index));
  }
  if (!(next.filter.rho > 0.0)) {
    throw NumericalAbort(next.step_index,
                         "adaptive gain left (0, rho_max] at step " +
                             std::to_string(next.step_index) + "; reduce sim.dt");
  }
  if (next.filter.rho > config.filter.rho_max) next.filter.rho = config.filter.rho_max;

  if (next.step_index % config.sim.renorm_stride == 0) {
    try {
      next.pose.R = orthonormalize(next.pose.R);
    } catch (const std::domain_error& e) {
      throw NumericalAbort(next.step_index, std::string(e.what()) + " at step " +
                                                std::to_string(next.step_index));
    }
  }
  return next;
}

std::uint64_t step_count(const SimSettings& sim) {
  return static_cast<std::uint64_t>(std::floor(sim.t_end / sim.dt * (1.0 + 1e-12)));
}

std::uint64_t expected_row_count(const SimSettings& sim) {
  return step_count(sim) / sim.record_stride + 1;
}

TrajectoryRow make_row(const SimState& state, const SimConfig& config, double noise) {
  TrajectoryRow row;
  row.t = static_cast<double>(state.step_index) * config.sim.dt;
  row.pose = state.pose;
  row.s = concentration(config.field, state.pose.p) + noise;
  row.filter = state.filter;
  row.eta = filter_output(state.filter);
  row.avg = averaged_frame(state.pose, row.t, config.swimmer);
  return row;
}

RunResult run(const SimConfig& config) {
  config.validate();
  RunResult result;
  const std::uint64_t steps = step_count(config.sim);
  const std::uint64_t stride = config.sim.record_stride;
  result.trajectory.reserve(static_cast<std::size_t>(steps / stride + 1));

  CounterRng rng(config.noise.seed);
  SimState state{0, config.init_pose, config.init_filter};
  double noise = draw_noise(config.noise, rng);
  result.trajectory.push_back(make_row(state, config, noise));

  for (std::uint64_t k = 0; k < steps; ++k) {
    try {
      state = step(state, config, noise);
    } catch (const NumericalAbort& e) {
      if (result.trajectory.back().t != static_cast<double>(state.step_index) * config.sim.dt) {
        result.trajectory.push_back(make_row(state, config, noise));
      }
      result.abort_message = e.what();
      result.abort_step = e.step_index();
      return result;
    }
    noise = draw_noise(config.noise, rng);
    if (state.step_index % stride == 0) result.trajectory.push_back(make_row(state, config, noise));
  }
  return result;
}

ArrivalMetrics arrival_metrics(const Trajectory& traj, const FieldSpec& field) {
  if (traj.empty()) throw std::invalid_argument("arrival_metrics: empty trajectory");
  ArrivalMetrics m;
  m.min_dist = std::numeric_limits<double>::infinity();
  for (const auto& row : traj) {
    const double d = norm(row.pose.p - field.source);
    m.min_dist = std::min(m.min_dist, d);
    if (!m.hit && d <= field.clamp_radius) {
      m.hit = true;
      m.t_hit = row.t;
    }
  }
  if (!m.hit) m.t_hit = traj.back().t;
  m.final_c = concentration(field, traj.back().pose.p);
  return m;
}

}  // namespace helixseek
