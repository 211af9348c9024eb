#include "helixseek/kinematics.hpp"

#include <numbers>
#include <stdexcept>

namespace helixseek {

double SwimmerParams::period() const { return 2.0 * std::numbers::pi / omega(); }

void SwimmerParams::validate() const {
  for (double x : {v, omega_par_0, omega_perp_0, omega_par_1, omega_perp_1}) {
    if (!std::isfinite(x)) throw std::invalid_argument("swimmer: non-finite parameter");
  }
  if (!(v > 0.0)) throw std::invalid_argument("swimmer.v must be > 0");
  if (!(omega() > 0.0)) {
    throw std::invalid_argument("swimmer: omega_par_0 and omega_perp_0 cannot both be zero");
  }
}

BodyVelocity body_velocity(const SwimmerParams& params, double eta) {
  return {{params.v, 0.0, 0.0},
          {params.omega_par_0 + params.omega_par_1 * eta, 0.0,
           params.omega_perp_0 + params.omega_perp_1 * eta}};
}

PoseRate pose_derivative(const Pose& pose, const Vec3& linear, const Vec3& angular) {
  return {pose.R * linear, pose.R * hat(angular)};
}

HelixInvariants helix_invariants(const SwimmerParams& params) {
  const double w = params.omega();
  const double w2 = w * w;
  HelixInvariants h;
  h.mean_velocity = (params.v * params.omega_par_0 / w2) * params.omega0();
  h.radius = params.v * std::abs(params.omega_perp_0) / w2;
  h.pitch_speed = params.v * std::abs(params.omega_par_0) / w;
  h.period = params.period();
  return h;
}

Mat3 helix_rotation(const SwimmerParams& params, double sigma) {
  return rot_exp(wrap_angle(sigma) * params.axis());
}

// With n the helix axis and V = (v,0,0):
//   exp(hat(n) s) V = (n.V) n + cos(s) V_perp + sin(s) n x V
// so the zero-mean primitive in s is sin(s) V_perp - cos(s) n x V.
Vec3 periodic_offset(const SwimmerParams& params, double sigma) {
  const Vec3 n = params.axis();
  const Vec3 body_v{params.v, 0.0, 0.0};
  const Vec3 v_perp = body_v - dot(n, body_v) * n;
  const Vec3 n_cross_v = cross(n, body_v);
  const double s = wrap_angle(sigma);
  return std::sin(s) * v_perp - std::cos(s) * n_cross_v;
}

AveragedPose averaged_frame(const Pose& pose, double t, const SwimmerParams& params) {
  const double sigma = params.omega() * t;
  AveragedPose avg;
  avg.R_bar = pose.R * transpose(helix_rotation(params, sigma));
  avg.p_bar = pose.p - params.eps() * (avg.R_bar * periodic_offset(params, sigma));
  return avg;
}

Pose reconstruct_pose(const AveragedPose& avg, double t, const SwimmerParams& params) {
  const double sigma = params.omega() * t;
  Pose pose;
  pose.R = avg.R_bar * helix_rotation(params, sigma);
  pose.p = avg.p_bar + params.eps() * (avg.R_bar * periodic_offset(params, sigma));
  return pose;
}

FeedbackCoefficients feedback_coefficients(const SwimmerParams& params, double sigma) {
  FeedbackCoefficients c;
  c.angular = helix_rotation(params, sigma) * params.omega1();
  c.linear = cross(periodic_offset(params, sigma), c.angular);
  return c;
}

PoseRate averaged_pose_derivative(const AveragedPose& avg, const SwimmerParams& params,
                                  const FeedbackCoefficients& coeffs, double eta) {
  const Vec3 mean_v = helix_invariants(params).mean_velocity;
  return {avg.R_bar * (params.eps() * eta * coeffs.linear + mean_v),
          avg.R_bar * hat(eta * coeffs.angular)};
}

}  // namespace helixseek
