#pragma once

// Independent oracles shared by the test binaries. Nothing here calls into the
// library's kinematics or filter code; rotations come from Eigen.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "helixseek/geometry.hpp"
#include "helixseek/kinematics.hpp"

namespace testsupport {

using helixseek::Mat3;
using helixseek::Vec3;

inline Eigen::Vector3d to_eigen(const Vec3& v) { return {v.x, v.y, v.z}; }
inline Vec3 vec_from_eigen(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

inline Eigen::Matrix3d to_eigen(const Mat3& m) {
  Eigen::Matrix3d e;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) e(r, c) = m(r, c);
  return e;
}

inline Mat3 mat_from_eigen(const Eigen::Matrix3d& e) {
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m.m[static_cast<std::size_t>(3 * r + c)] = e(r, c);
  return m;
}

inline double max_abs_diff(const Mat3& a, const Mat3& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 9; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
  return d;
}

/// Rotation by angle |w| about w, from Eigen's angle-axis.
inline Eigen::Matrix3d eigen_rotation(const Eigen::Vector3d& w) {
  const double theta = w.norm();
  if (theta == 0.0) return Eigen::Matrix3d::Identity();
  return Eigen::AngleAxisd(theta, w / theta).toRotationMatrix();
}

/// Unforced helix: R(t) = R0 exp(hat(W) t), p(t) = p0 + R0 * int_0^t exp(hat(W) s) V ds,
/// with the integral split into the components of V along and across W.
inline helixseek::Pose closed_form_helix(const helixseek::SwimmerParams& sp,
                                         const helixseek::Pose& start, double t) {
  const Eigen::Vector3d W(sp.omega_par_0, 0.0, sp.omega_perp_0);
  const Eigen::Vector3d V(sp.v, 0.0, 0.0);
  const double w = W.norm();
  const Eigen::Vector3d n = W / w;
  const Eigen::Vector3d v_par = n.dot(V) * n;
  const Eigen::Vector3d v_perp = V - v_par;
  const Eigen::Vector3d integral = v_par * t + std::sin(w * t) / w * v_perp +
                                   (1.0 - std::cos(w * t)) / w * n.cross(v_perp);
  const Eigen::Matrix3d R0 = to_eigen(start.R);
  helixseek::Pose out;
  out.p = vec_from_eigen(to_eigen(start.p) + R0 * integral);
  out.R = mat_from_eigen(R0 * eigen_rotation(W * t));
  return out;
}

/// Classical RK4 step for a fixed-size state.
template <std::size_t N, typename F>
std::array<double, N> rk4_step(const std::array<double, N>& y, double t, double h, F&& f) {
  auto axpy = [](const std::array<double, N>& a, double s, const std::array<double, N>& b) {
    std::array<double, N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  const auto k1 = f(t, y);
  const auto k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const auto k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const auto k4 = f(t + h, axpy(y, h, k3));
  std::array<double, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
  return r;
}

inline Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return mat_from_eigen(q.toRotationMatrix());
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v{g(rng), g(rng), g(rng)};
  return v / helixseek::norm(v);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("helixseek_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline double angle_between(const Vec3& a, const Vec3& b) {
  const double c = helixseek::dot(a, b) / (helixseek::norm(a) * helixseek::norm(b));
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace testsupport
