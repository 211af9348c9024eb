#pragma once

// Analytic concentration fields with exact gradients, and additive stimulus
// noise drawn from a counter-based random stream.

#include <cstdint>
#include <string_view>

#include "helixseek/geometry.hpp"

namespace helixseek {

enum class FieldVariant { RadialInverse, Linear, Gaussian, Uniform };

std::string_view to_string(FieldVariant v);
/// Throws std::invalid_argument for unknown names.
FieldVariant field_variant_from_string(std::string_view name);

struct FieldSpec {
  FieldVariant variant{FieldVariant::RadialInverse};
  Vec3 source;
  double l0{1.0};            ///< radial strength: c = l0 / r
  double clamp_radius{0.01};  ///< radial singularity guard, also the arrival radius
  Vec3 direction{1.0, 0.0, 0.0};  ///< linear variant, unit norm
  double slope{1.0};              ///< linear variant
  double c0{1.0};                 ///< linear offset at the source; uniform value
  double width{1.0};              ///< gaussian variant
  double peak{1.0};               ///< gaussian variant

  void validate() const;
};

double concentration(const FieldSpec& field, const Vec3& p);
Vec3 gradient(const FieldSpec& field, const Vec3& p);

/// Counter-based generator: draw k of stream (seed, stream) is a pure function of
/// (seed, stream, k), so parallel runs get independent reproducible streams.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64();
  /// Uniform in (0, 1).
  double next_uniform();
  /// Standard normal via Box-Muller; consumes two counters per draw.
  double next_gaussian();

  std::uint64_t counter() const { return counter_; }
  CounterRng split(std::uint64_t stream) const { return CounterRng(seed_, stream); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_{0};
};

enum class NoiseKind { None, AdditiveGaussian };

std::string_view to_string(NoiseKind k);
NoiseKind noise_kind_from_string(std::string_view name);

struct NoiseSpec {
  NoiseKind kind{NoiseKind::None};
  double std_dev{0.0};  ///< config key "std"
  std::uint64_t seed{0};

  void validate() const;
};

/// Draws the additive noise term only; zero (and no RNG advance) when disabled.
double draw_noise(const NoiseSpec& noise, CounterRng& rng);

/// s = c(p) + noise. Advances rng only when noise is active.
double sample_stimulus(const FieldSpec& field, const NoiseSpec& noise, const Vec3& p,
                       CounterRng& rng);

}  // namespace helixseek
