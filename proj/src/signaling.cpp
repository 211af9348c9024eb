#include "helixseek/signaling.hpp"

#include "helixseek/geometry.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace helixseek {

void FilterParams::validate() const {
  for (double x : {sigma1, sigma2, mu, rho_max}) {
    if (!std::isfinite(x)) throw std::invalid_argument("filter: non-finite parameter");
  }
  if (!(sigma2 > 0.0)) throw std::invalid_argument("filter.sigma2 must be > 0");
  if (!(sigma1 >= sigma2)) throw std::invalid_argument("filter.sigma1 must be >= filter.sigma2");
  if (!(mu > 0.0)) throw std::invalid_argument("filter.mu must be > 0");
  if (!(rho_max >= 1.0)) throw std::invalid_argument("filter.rho_max must be >= 1");
}

FilterState filter_derivative(const FilterState& state, const FilterParams& params,
                              double stimulus) {
  const double zeta = state.zeta2 - state.zeta1;
  const double eta = state.rho * zeta;
  FilterState d;
  d.zeta1 = zeta / params.sigma1;
  d.zeta2 = (stimulus - state.zeta2) / params.sigma2;
  d.rho = state.rho * (1.0 - eta * eta) / params.mu;
  if (state.rho >= params.rho_max && d.rho > 0.0) d.rho = 0.0;
  return d;
}

FrequencyResponse transfer_gain_phase(const FilterParams& params, double freq) {
  const double a = params.sigma1 * freq;
  const double b = params.sigma2 * freq;
  FrequencyResponse r;
  r.gain = a / std::sqrt((1.0 + a * a) * (1.0 + b * b));
  r.phase = std::numbers::pi / 2.0 - std::atan(a) - std::atan(b);
  return r;
}

HarmonicFit harmonic_fit(std::span<const double> times, std::span<const double> values,
                         double freq) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("harmonic_fit: times and values differ in length");
  }
  if (times.size() < 3) throw std::invalid_argument("harmonic_fit: need at least 3 samples");

  // Normal equations in the basis {1, cos, sin}, centered in time for conditioning.
  const double t0 = times.front();
  std::array<std::array<double, 3>, 3> a{};
  std::array<double, 3> rhs{};
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double arg = freq * (times[i] - t0);
    const std::array<double, 3> basis{1.0, std::cos(arg), std::sin(arg)};
    for (int r = 0; r < 3; ++r) {
      rhs[r] += basis[r] * values[i];
      for (int c = 0; c < 3; ++c) a[r][c] += basis[r] * basis[c];
    }
  }

  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    std::swap(rhs[col], rhs[piv]);
    if (std::abs(a[col][col]) < 1e-300) {
      throw std::invalid_argument("harmonic_fit: singular design (samples do not resolve freq)");
    }
    for (int r = col + 1; r < 3; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::array<double, 3> x{};
  for (int r = 2; r >= 0; --r) {
    double s = rhs[r];
    for (int c = r + 1; c < 3; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }

  // c cos(u) + d sin(u) = b cos(u + psi) with c = b cos(psi), d = -b sin(psi).
  HarmonicFit fit;
  fit.bias = x[0];
  fit.amplitude = std::hypot(x[1], x[2]);
  if (fit.amplitude > 1e-12 * (std::abs(x[0]) + 1e-300)) {
    fit.phase = wrap_angle(std::atan2(-x[2], x[1]) - freq * t0);
  } else {
    fit.amplitude = 0.0;
    fit.phase = 0.0;
  }
  return fit;
}

HarmonicFit quasi_steady_fit(std::span<const double> times, std::span<const double> values,
                             double freq) {
  if (!(freq > 0.0)) throw std::invalid_argument("quasi_steady_fit: freq must be > 0");
  if (times.size() < 2) throw std::invalid_argument("quasi_steady_fit: series too short");
  const double period = 2.0 * std::numbers::pi / freq;
  const double span = times.back() - times.front();
  if (span < 5.0 * period * (1.0 - 1e-9)) {
    throw std::invalid_argument("quasi_steady_fit: series covers " + std::to_string(span / period) +
                                " periods, need >= 5");
  }
  const double per_period = static_cast<double>(times.size() - 1) / (span / period);
  if (per_period < 32.0 * (1.0 - 1e-9)) {
    throw std::invalid_argument("quasi_steady_fit: fewer than 32 samples per period");
  }
  return harmonic_fit(times, values, freq);
}

}  // namespace helixseek
