#include "helixseek/geometry.hpp"

#include <numbers>
#include <stdexcept>

namespace helixseek {

namespace {

constexpr double kSmallAngle = 1e-8;

Mat3 inverse_transpose(const Mat3& a, double det) {
  // Cofactor matrix divided by the determinant.
  Mat3 c;
  c(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  c(0, 1) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
  c(0, 2) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
  c(1, 0) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
  c(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
  c(1, 2) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
  c(2, 0) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
  c(2, 1) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
  c(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return c * (1.0 / det);
}

}  // namespace

double orthonormality_error(const Mat3& r) {
  return frobenius_norm(transpose(r) * r - Mat3::identity());
}

Mat3 rot_exp(const Vec3& v) {
  const double theta = norm(v);
  const Mat3 k = hat(v);
  const Mat3 k2 = k * k;
  if (theta < kSmallAngle) {
    return Mat3::identity() + k + 0.5 * k2;
  }
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return Mat3::identity() + a * k + b * k2;
}

Mat3 orthonormalize(const Mat3& r) {
  if (!is_finite(r)) {
    throw std::domain_error("orthonormalize: non-finite matrix");
  }
  const double det0 = determinant(r);
  if (!(det0 > 0.5)) {
    throw std::domain_error("orthonormalize: matrix is near-singular or reflecting (det <= 0.5)");
  }

  // Newton iteration for the orthogonal polar factor: X <- (X + X^-T) / 2.
  Mat3 x = r;
  double det = det0;
  for (int it = 0; it < 50; ++it) {
    const Mat3 next = 0.5 * (x + inverse_transpose(x, det));
    const double change = frobenius_norm(next - x);
    x = next;
    det = determinant(x);
    if (change < 1e-15) break;
  }
  // One Newton-Schulz polish step to settle rounding.
  const Mat3 g = transpose(x) * x;
  x = 0.5 * (x * (3.0 * Mat3::identity() - g));
  return x;
}

double wrap_angle(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

}  // namespace helixseek
