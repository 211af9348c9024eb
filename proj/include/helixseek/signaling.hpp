#pragma once

// Signaling pathway: a two-stage lag chain whose difference is a band-pass
// filter, followed by an adaptive output gain that normalizes the feedback.
//
//   sigma1 dzeta1 = zeta2 - zeta1
//   sigma2 dzeta2 = s - zeta2
//   mu drho       = rho (1 - (rho zeta)^2),  zeta = zeta2 - zeta1
//   eta           = rho zeta

#include <span>

namespace helixseek {

struct FilterParams {
  double sigma1{1.0};  ///< relaxation time constant
  double sigma2{1.0};  ///< stimulation time constant, <= sigma1
  double mu{1.0};      ///< adaptation time constant
  double rho_max{1e6};  ///< gain ceiling; the adaptation law diverges when zeta == 0

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
};

/// Internal filter state. Also used as its own tangent type.
struct FilterState {
  double zeta1{0.0};
  double zeta2{0.0};
  double rho{1.0};
};

FilterState filter_derivative(const FilterState& state, const FilterParams& params,
                              double stimulus);

inline double filter_output(const FilterState& state) {
  return state.rho * (state.zeta2 - state.zeta1);
}

struct FrequencyResponse {
  double gain{0.0};
  double phase{0.0};  ///< output lead over the input, radians
};

/// Response of zeta to a sinusoidal stimulus at angular frequency freq:
///   H(jf) = sigma1 jf / ((1 + sigma1 jf)(1 + sigma2 jf)).
FrequencyResponse transfer_gain_phase(const FilterParams& params, double freq);

struct HarmonicFit {
  double bias{0.0};
  double amplitude{0.0};
  double phase{0.0};
};

/// Least-squares fit of bias + amplitude * cos(freq t + phase) to samples.
/// Requires at least 5 periods of data at an average of >= 32 samples per
/// period; throws std::invalid_argument otherwise.
HarmonicFit quasi_steady_fit(std::span<const double> times, std::span<const double> values,
                             double freq);

/// Same fit without the coverage precondition, for short analysis windows.
HarmonicFit harmonic_fit(std::span<const double> times, std::span<const double> values,
                         double freq);

}  // namespace helixseek
