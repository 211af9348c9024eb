#pragma once

// JSON configuration: strict schema (unknown keys rejected), canonical
// serialization, content digests and the bundled scenarios.
//
// Top-level keys:
//   swimmer {v, omega_par_0, omega_perp_0, omega_par_1, omega_perp_1}
//   filter  {sigma1, sigma2, mu, rho_max?}
//   field   {variant, source?, l0?, clamp_radius?, direction?, slope?, c0?, width?, peak?}
//   noise?  {kind, std?, seed?}
//   sim     {dt?, t_end, record_stride?, renorm_stride?}   dt defaults to period/200
//   init?   {p?, R?, zeta1?, zeta2?, rho?}

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "helixseek/simulation.hpp"

namespace helixseek {

/// Schema or validation failure; key() is the dotted path of the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

SimConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SimConfig& config);

/// Sorted keys, two-space indent, shortest round-trip doubles, trailing newline.
std::string canonical_dump(const SimConfig& config);

SimConfig load_config(const std::filesystem::path& path);
void save_config(const SimConfig& config, const std::filesystem::path& path);

/// Replaces the numeric leaf at a dotted path ("filter.sigma1", "init.p.2").
/// Throws ConfigError if the path does not name an existing numeric leaf.
void set_numeric_leaf(nlohmann::json& j, const std::string& path, double value);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);

/// The radial-field reproduction scenario with helix and filter constants
/// v = l0/s, w_perp_0 = -7, w_par_0 = -5, w_perp_1 = -1, w_par_1 = -5,
/// sigma1 = 2/w, sigma2 = 1/w, mu = 1/(3w), started at p = -(l0, l0, 3.5 l0).
/// Arrival radius 0.2 l0 (egg scale, 40 um at l0 = 200 um), t_end = 30 s.
SimConfig fig2_config(double l0 = 200.0);

/// Confines motion to the body x-y plane: w_par_0 = w_par_1 = 0.
void make_planar(SimConfig& config);

}  // namespace helixseek
