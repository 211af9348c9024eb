#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "helixseek/config.hpp"
#include "helixseek/simulation.hpp"
#include "support.hpp"

using namespace helixseek;

namespace {

constexpr double kL0 = 200.0;

// Uniform stimulus with the lag states already equal: zeta stays 0, so eta = 0.
SimConfig unforced_config() {
  SimConfig c = fig2_config(kL0);
  c.field.variant = FieldVariant::Uniform;
  c.field.c0 = 1.0;
  c.init_filter = {1.0, 1.0, 1.0};
  return c;
}

double one_period_error(SimConfig c, int steps_per_period) {
  c.sim.dt = c.swimmer.period() / steps_per_period;
  SimState s{0, c.init_pose, c.init_filter};
  for (int i = 0; i < steps_per_period; ++i) s = step(s, c);
  const Pose exact = testsupport::closed_form_helix(c.swimmer, c.init_pose, steps_per_period * c.sim.dt);
  return norm(exact.p - s.pose.p);
}

bool identical(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[i];
    if (x.t != y.t || x.s != y.s || x.eta != y.eta || x.pose.p.x != y.pose.p.x ||
        x.pose.p.y != y.pose.p.y || x.pose.p.z != y.pose.p.z || x.pose.R.m != y.pose.R.m ||
        x.filter.rho != y.filter.rho || x.filter.zeta1 != y.filter.zeta1 ||
        x.filter.zeta2 != y.filter.zeta2) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("zero motion and zero stimulus is a fixed point") {
  SimConfig c = unforced_config();
  c.swimmer = {0.0, 0.0, 0.0, 0.0, 0.0};
  c.field.c0 = 0.0;
  c.init_filter = {0.0, 0.0, c.filter.rho_max};
  const SimState s0{0, {{1.0, 2.0, 3.0}, rot_exp({0.1, 0.2, 0.3})}, c.init_filter};
  const SimState s1 = step(s0, c);
  CHECK(s1.step_index == 1);
  CHECK(norm(s1.pose.p - s0.pose.p) == 0.0);
  CHECK(testsupport::max_abs_diff(s1.pose.R, s0.pose.R) <= 1e-15);
  CHECK(s1.filter.zeta1 == 0.0);
  CHECK(s1.filter.zeta2 == 0.0);
  CHECK(s1.filter.rho == c.filter.rho_max);
}

TEST_CASE("unforced swimmer follows the closed-form helix") {
  SimConfig c = unforced_config();
  c.sim.dt = 1e-4;
  const int steps = static_cast<int>(std::round(c.swimmer.period() / c.sim.dt));
  SimState s{0, c.init_pose, c.init_filter};
  for (int i = 0; i < steps; ++i) s = step(s, c);
  const Pose exact = testsupport::closed_form_helix(c.swimmer, c.init_pose, steps * c.sim.dt);
  CHECK(norm(exact.p - s.pose.p) <= 1e-8 * kL0);
  CHECK(testsupport::max_abs_diff(exact.R, s.pose.R) <= 1e-8);
}

TEST_CASE("fourth-order convergence") {
  const SimConfig c = unforced_config();
  for (int n : {50, 100, 200}) {
    const double ratio = one_period_error(c, n) / one_period_error(c, 2 * n);
    CAPTURE(n);
    CHECK(ratio >= 14.0);
    CHECK(ratio <= 18.0);
  }
}

TEST_CASE("closed-loop run matches the averaged-coordinate integration") {
  SimConfig c = fig2_config(kL0);
  const SwimmerParams& sp = c.swimmer;
  const double h = sp.period() / 2000.0;
  c.sim.dt = h;
  c.sim.t_end = 10.0 * sp.period();
  const RunResult direct = run(c);
  REQUIRE(direct.ok());

  // y = (p_bar, R_bar, zeta1, zeta2, rho); the stimulus is sampled at the
  // reconstructed body position.
  using State15 = std::array<double, 15>;
  auto pack = [](const AveragedPose& a, const FilterState& f) {
    State15 y{};
    y[0] = a.p_bar.x;
    y[1] = a.p_bar.y;
    y[2] = a.p_bar.z;
    for (std::size_t i = 0; i < 9; ++i) y[3 + i] = a.R_bar.m[i];
    y[12] = f.zeta1;
    y[13] = f.zeta2;
    y[14] = f.rho;
    return y;
  };
  auto unpack = [](const State15& y, AveragedPose& a, FilterState& f) {
    a.p_bar = {y[0], y[1], y[2]};
    for (std::size_t i = 0; i < 9; ++i) a.R_bar.m[i] = y[3 + i];
    f = {y[12], y[13], y[14]};
  };
  auto rhs = [&](double t, const State15& y) {
    AveragedPose a;
    FilterState f;
    unpack(y, a, f);
    const Pose pose = reconstruct_pose(a, t, sp);
    const FilterState df = filter_derivative(f, c.filter, concentration(c.field, pose.p));
    const PoseRate dr = averaged_pose_derivative(a, sp, feedback_coefficients(sp, sp.omega() * t),
                                                 filter_output(f));
    return pack({dr.dp, dr.dR}, df);
  };

  State15 y = pack(averaged_frame(c.init_pose, 0.0, sp), c.init_filter);
  double max_err = 0.0, max_eta_err = 0.0;
  for (std::size_t k = 1; k < direct.trajectory.size(); ++k) {
    y = testsupport::rk4_step(y, (k - 1) * h, h, rhs);
    AveragedPose a;
    FilterState f;
    unpack(y, a, f);
    const Pose rebuilt = reconstruct_pose(a, k * h, sp);
    max_err = std::max(max_err, norm(rebuilt.p - direct.trajectory[k].pose.p));
    max_eta_err = std::max(max_eta_err, std::abs(filter_output(f) - direct.trajectory[k].eta));
  }
  CHECK(max_err <= 1e-7 * kL0);
  CHECK(max_eta_err <= 1e-7);
}

TEST_CASE("row count, time ordering and recorded invariants") {
  SimConfig c = fig2_config(kL0);
  c.sim.t_end = 5.0;
  c.sim.record_stride = 3;
  const RunResult r = run(c);
  REQUIRE(r.ok());
  const auto& traj = r.trajectory;
  CHECK(traj.size() == static_cast<std::size_t>(std::floor(c.sim.t_end / (c.sim.dt * 3)) + 1));
  CHECK(traj.size() == expected_row_count(c.sim));
  CHECK(traj.front().t == 0.0);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& row = traj[i];
    if (i > 0) CHECK(row.t > traj[i - 1].t);
    CHECK(orthonormality_error(row.pose.R) <= 1e-9);
    const BodyVelocity bv = body_velocity(c.swimmer, row.eta);
    const double speed = norm(pose_derivative(row.pose, bv.linear, bv.angular).dp);
    CHECK(speed == doctest::Approx(c.swimmer.v).epsilon(1e-9));
    CHECK(row.eta == doctest::Approx(filter_output(row.filter)).epsilon(1e-15));
    CHECK(row.s == concentration(c.field, row.pose.p));
    const AveragedPose avg = averaged_frame(row.pose, row.t, c.swimmer);
    CHECK(norm(avg.p_bar - row.avg.p_bar) == 0.0);
  }
}

TEST_CASE("planar tuning keeps the path in its starting plane") {
  SimConfig c = fig2_config(kL0);
  make_planar(c);
  const RunResult r = run(c);
  REQUIRE(r.ok());
  const double z0 = r.trajectory.front().pose.p.z;
  double worst = 0.0;
  for (const auto& row : r.trajectory) worst = std::max(worst, std::abs(row.pose.p.z - z0));
  CHECK(worst <= 1e-10 * kL0);
}

TEST_CASE("runs are deterministic, including noise") {
  SimConfig c = fig2_config(kL0);
  c.sim.t_end = 5.0;
  c.noise = {NoiseKind::AdditiveGaussian, 1e-3, 99};
  const RunResult a = run(c);
  const RunResult b = run(c);
  CHECK(identical(a.trajectory, b.trajectory));

  c.noise.seed = 100;
  const RunResult d = run(c);
  CHECK_FALSE(identical(a.trajectory, d.trajectory));
}

TEST_CASE("noise is held across the stages of a step") {
  SimConfig c = fig2_config(kL0);
  c.sim.t_end = 1.0;
  c.noise = {NoiseKind::AdditiveGaussian, 0.01, 3};
  const RunResult r = run(c);
  CounterRng rng(3);
  for (std::size_t i = 0; i < 20; ++i) {
    const double expected = concentration(c.field, r.trajectory[i].pose.p) + 0.01 * rng.next_gaussian();
    CHECK(r.trajectory[i].s == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("radial-field scenario closes in on the source") {
  const SimConfig c = fig2_config(kL0);
  const RunResult r = run(c);
  REQUIRE(r.ok());
  const double d0 = norm(r.trajectory.front().pose.p - c.field.source);
  const double d1 = norm(r.trajectory.back().pose.p - c.field.source);
  CHECK(d0 == doctest::Approx(std::sqrt(14.25) * kL0).epsilon(1e-15));
  CHECK(d1 < d0);
  const ArrivalMetrics m = arrival_metrics(r.trajectory, c.field);
  CHECK(m.hit);
  CHECK(m.t_hit == doctest::Approx(11.171551445688383).epsilon(1e-9));
}

TEST_CASE("arrival metrics") {
  FieldSpec f;
  f.variant = FieldVariant::RadialInverse;
  f.l0 = 1.0;
  f.clamp_radius = 0.5;
  Trajectory pinned(3);
  for (std::size_t i = 0; i < 3; ++i) pinned[i].t = 0.1 * i;
  ArrivalMetrics m = arrival_metrics(pinned, f);
  CHECK(m.hit);
  CHECK(m.t_hit == 0.0);
  CHECK(m.min_dist == 0.0);

  SimConfig c = unforced_config();
  c.field.variant = FieldVariant::Uniform;
  c.sim.t_end = 3.0;
  c.init_pose.p = {10.0 * kL0, 0.0, 0.0};
  const RunResult r = run(c);
  m = arrival_metrics(r.trajectory, c.field);
  CHECK_FALSE(m.hit);
  CHECK(m.t_hit == r.trajectory.back().t);
  CHECK(m.final_c == 1.0);
}

TEST_CASE("non-finite states abort with the last good row") {
  SimConfig c = fig2_config(kL0);
  const SimState s{0, c.init_pose, c.init_filter};
  CHECK_THROWS_AS(step(s, c, std::numeric_limits<double>::quiet_NaN()), NumericalAbort);

  c.sim.t_end = 1.0;
  c.noise = {NoiseKind::AdditiveGaussian, 1e300, 1};
  const RunResult r = run(c);
  CHECK_FALSE(r.ok());
  REQUIRE_FALSE(r.trajectory.empty());
  CHECK(r.abort_step >= 1);
  CHECK(std::isfinite(r.trajectory.back().pose.p.x));
}

TEST_CASE("config validation and warnings") {
  SimConfig c = fig2_config(kL0);
  CHECK(c.warnings().empty());
  c.sim.dt = c.swimmer.period() / 20.0;
  CHECK(c.warnings().size() == 1);
  c.sim.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = fig2_config(kL0);
  c.sim.t_end = c.sim.dt / 2.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
