#pragma once

// Swimmer kinematics: body-frame velocities with curvature feedback, rigid
// body pose rates, and the exact transform to the averaged (helix-axis) frame.
//
// Conventions. The constant body rate Omega0 = (w_par_0, 0, w_perp_0) spins the
// body about the unit axis n = Omega0 / omega. The phase sigma = omega * t
// parametrizes one revolution; exp(hat(Omega0) t) is the rotation by sigma
// about n. All periodic quantities take sigma and reduce it modulo 2*pi.

#include "helixseek/geometry.hpp"

namespace helixseek {

struct SwimmerParams {
  double v{1.0};             ///< swimming speed along body x
  double omega_par_0{0.0};   ///< constant twist rate (body x)
  double omega_perp_0{0.0};  ///< constant curvature rate (body z)
  double omega_par_1{0.0};   ///< twist gain per unit eta
  double omega_perp_1{0.0};  ///< curvature gain per unit eta

  /// Helix frequency sqrt(w_perp_0^2 + w_par_0^2).
  double omega() const { return std::hypot(omega_perp_0, omega_par_0); }
  double eps() const { return 1.0 / omega(); }
  double period() const;

  Vec3 omega0() const { return {omega_par_0, 0.0, omega_perp_0}; }
  Vec3 omega1() const { return {omega_par_1, 0.0, omega_perp_1}; }
  /// Unit helix axis Omega0 / omega in body coordinates.
  Vec3 axis() const { return omega0() / omega(); }

  /// Throws std::invalid_argument if v <= 0, omega == 0 or any field is not finite.
  void validate() const;
};

struct Pose {
  Vec3 p;
  Mat3 R{Mat3::identity()};
};

struct AveragedPose {
  Vec3 p_bar;
  Mat3 R_bar{Mat3::identity()};
};

struct BodyVelocity {
  Vec3 linear;   ///< V, body frame
  Vec3 angular;  ///< Omega, body frame
};

struct PoseRate {
  Vec3 dp;
  Mat3 dR;
};

BodyVelocity body_velocity(const SwimmerParams& params, double eta);

/// dp = R V, dR = R hat(Omega).
PoseRate pose_derivative(const Pose& pose, const Vec3& linear, const Vec3& angular);

struct HelixInvariants {
  Vec3 mean_velocity;  ///< average body-frame velocity without feedback
  double radius{0.0};
  double pitch_speed{0.0};  ///< axial drift speed
  double period{0.0};
};

HelixInvariants helix_invariants(const SwimmerParams& params);

/// Zero-mean 2*pi-periodic primitive of exp(hat(Omega0) sigma/omega) V - mean_velocity
/// with respect to sigma. eps * delta is the position offset of the body from the
/// helix axis.
Vec3 periodic_offset(const SwimmerParams& params, double sigma);

/// Rotation exp(hat(Omega0) t) written in terms of the phase sigma = omega t.
Mat3 helix_rotation(const SwimmerParams& params, double sigma);

AveragedPose averaged_frame(const Pose& pose, double t, const SwimmerParams& params);

/// Inverse of averaged_frame.
Pose reconstruct_pose(const AveragedPose& avg, double t, const SwimmerParams& params);

struct FeedbackCoefficients {
  Vec3 linear;   ///< V_eta
  Vec3 angular;  ///< Omega_eta
};

/// Omega_eta(sigma) = exp(hat(Omega0) sigma/omega) Omega1 and
/// V_eta(sigma) = delta(sigma) x Omega_eta(sigma).
FeedbackCoefficients feedback_coefficients(const SwimmerParams& params, double sigma);

/// Averaged dynamics: dp_bar = R_bar (eps eta V_eta + mean_velocity),
/// dR_bar = R_bar hat(eta Omega_eta). The coefficients are passed in so callers
/// can evaluate them once per stage.
PoseRate averaged_pose_derivative(const AveragedPose& avg, const SwimmerParams& params,
                                  const FeedbackCoefficients& coeffs, double eta);

}  // namespace helixseek
