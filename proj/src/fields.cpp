#include "helixseek/fields.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>

namespace helixseek {

std::string_view to_string(FieldVariant v) {
  switch (v) {
    case FieldVariant::RadialInverse: return "radial-inverse";
    case FieldVariant::Linear: return "linear";
    case FieldVariant::Gaussian: return "gaussian";
    case FieldVariant::Uniform: return "uniform";
  }
  return "unknown";
}

FieldVariant field_variant_from_string(std::string_view name) {
  for (auto v : {FieldVariant::RadialInverse, FieldVariant::Linear, FieldVariant::Gaussian,
                 FieldVariant::Uniform}) {
    if (to_string(v) == name) return v;
  }
  throw std::invalid_argument("unknown field variant '" + std::string(name) + "'");
}

void FieldSpec::validate() const {
  if (!is_finite(source) || !is_finite(direction)) {
    throw std::invalid_argument("field: non-finite vector");
  }
  for (double x : {l0, clamp_radius, slope, c0, width, peak}) {
    if (!std::isfinite(x)) throw std::invalid_argument("field: non-finite parameter");
  }
  if (!(l0 > 0.0)) throw std::invalid_argument("field.l0 must be > 0");
  if (!(clamp_radius > 0.0)) throw std::invalid_argument("field.clamp_radius must be > 0");
  if (variant == FieldVariant::Linear && std::abs(norm(direction) - 1.0) > 1e-12) {
    throw std::invalid_argument("field.direction must be a unit vector");
  }
  if (variant == FieldVariant::Gaussian && !(width > 0.0)) {
    throw std::invalid_argument("field.width must be > 0");
  }
}

double concentration(const FieldSpec& field, const Vec3& p) {
  const Vec3 d = p - field.source;
  switch (field.variant) {
    case FieldVariant::RadialInverse:
      return field.l0 / std::max(norm(d), field.clamp_radius);
    case FieldVariant::Linear:
      return std::max(0.0, field.c0 + field.slope * dot(field.direction, d));
    case FieldVariant::Gaussian:
      return field.peak * std::exp(-dot(d, d) / (2.0 * field.width * field.width));
    case FieldVariant::Uniform:
      return field.c0;
  }
  return 0.0;
}

Vec3 gradient(const FieldSpec& field, const Vec3& p) {
  const Vec3 d = p - field.source;
  switch (field.variant) {
    case FieldVariant::RadialInverse: {
      const double r = norm(d);
      if (r <= field.clamp_radius) return {};
      return (-field.l0 / (r * r * r)) * d;
    }
    case FieldVariant::Linear:
      if (field.c0 + field.slope * dot(field.direction, d) <= 0.0) return {};
      return field.slope * field.direction;
    case FieldVariant::Gaussian: {
      const double w2 = field.width * field.width;
      return (-concentration(field, p) / w2) * d;
    }
    case FieldVariant::Uniform:
      return {};
  }
  return {};
}

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::next_u64() {
  const std::uint64_t key = splitmix64(seed_ ^ splitmix64(stream_ + 0x632be59bd9b4e019ULL));
  return splitmix64(key + 0x9e3779b97f4a7c15ULL * (counter_++));
}

double CounterRng::next_uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string_view to_string(NoiseKind k) {
  return k == NoiseKind::None ? "none" : "additive-gaussian";
}

NoiseKind noise_kind_from_string(std::string_view name) {
  if (name == "none") return NoiseKind::None;
  if (name == "additive-gaussian") return NoiseKind::AdditiveGaussian;
  throw std::invalid_argument("unknown noise kind '" + std::string(name) + "'");
}

void NoiseSpec::validate() const {
  if (!std::isfinite(std_dev) || std_dev < 0.0) throw std::invalid_argument("noise.std must be >= 0");
}

double draw_noise(const NoiseSpec& noise, CounterRng& rng) {
  if (noise.kind == NoiseKind::None || noise.std_dev == 0.0) return 0.0;
  return noise.std_dev * rng.next_gaussian();
}

double sample_stimulus(const FieldSpec& field, const NoiseSpec& noise, const Vec3& p,
                       CounterRng& rng) {
  return concentration(field, p) + draw_noise(noise, rng);
}

}  // namespace helixseek
