#include "helixseek/config.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace helixseek {

using nlohmann::json;

namespace {

// Reads one JSON object section, tracking consumed keys so leftovers can be
// reported as unknown.
class Section {
 public:
  Section(const json& root, std::string name, bool required) : name_(std::move(name)) {
    if (!root.contains(name_)) {
      if (required) throw ConfigError(name_, "missing required section");
      return;
    }
    obj_ = &root.at(name_);
    if (!obj_->is_object()) throw ConfigError(name_, "expected an object");
  }

  bool present() const { return obj_ != nullptr; }
  bool has(const std::string& key) const { return obj_ != nullptr && obj_->contains(key); }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const json* v = find(key, fallback.has_value());
    if (v == nullptr) return *fallback;
    if (!v->is_number()) throw ConfigError(path(key), "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw ConfigError(path(key), "must be finite");
    return x;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) {
    const json* v = find(key, true);
    if (v == nullptr) return fallback;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number()) {
      const double x = v->get<double>();
      if (x >= 0.0 && x == std::floor(x) && x < 1.8e19) return static_cast<std::uint64_t>(x);
    }
    throw ConfigError(path(key), "expected a non-negative integer");
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    const json* v = find(key, fallback.has_value());
    if (v == nullptr) return *fallback;
    if (!v->is_string()) throw ConfigError(path(key), "expected a string");
    return v->get<std::string>();
  }

  Vec3 vec3(const std::string& key, Vec3 fallback) {
    const json* v = find(key, true);
    if (v == nullptr) return fallback;
    if (!v->is_array() || v->size() != 3) throw ConfigError(path(key), "expected [x, y, z]");
    std::array<double, 3> c{};
    for (std::size_t i = 0; i < 3; ++i) {
      if (!(*v)[i].is_number()) throw ConfigError(path(key), "expected numeric components");
      c[i] = (*v)[i].get<double>();
    }
    return {c[0], c[1], c[2]};
  }

  Mat3 mat3(const std::string& key, Mat3 fallback) {
    const json* v = find(key, true);
    if (v == nullptr) return fallback;
    if (!v->is_array() || v->size() != 3) throw ConfigError(path(key), "expected 3 rows");
    Mat3 m;
    for (int r = 0; r < 3; ++r) {
      const json& row = (*v)[static_cast<std::size_t>(r)];
      if (!row.is_array() || row.size() != 3) throw ConfigError(path(key), "expected 3x3 matrix");
      for (int c = 0; c < 3; ++c) {
        const json& e = row[static_cast<std::size_t>(c)];
        if (!e.is_number()) throw ConfigError(path(key), "expected numeric entries");
        m(r, c) = e.get<double>();
      }
    }
    return m;
  }

  void finish() const {
    if (obj_ == nullptr) return;
    for (const auto& [key, value] : obj_->items()) {
      if (!seen_.contains(key)) throw ConfigError(path(key), "unknown key");
    }
  }

  std::string path(const std::string& key) const { return name_ + "." + key; }

 private:
  const json* find(const std::string& key, bool optional) {
    seen_.insert(key);
    if (obj_ == nullptr || !obj_->contains(key)) {
      if (!optional) throw ConfigError(path(key), "missing required key");
      return nullptr;
    }
    return &obj_->at(key);
  }

  std::string name_;
  const json* obj_{nullptr};
  std::set<std::string> seen_;
};

json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json to_json(const Mat3& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return rows;
}

// Runs a validator and rewrites its message as a ConfigError keyed by the
// dotted name at the start of the message when there is one.
template <typename F>
void checked(F&& validate) {
  try {
    validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    const auto space = msg.find(' ');
    std::string key = msg.substr(0, space);
    if (key.find('.') == std::string::npos || key.back() == ':') key.clear();
    throw ConfigError(key, key.empty() ? msg : msg.substr(space + 1));
  }
}

}  // namespace

SimConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config root must be an object");
  static const std::set<std::string> kSections{"swimmer", "filter", "field", "noise", "sim", "init"};
  for (const auto& [key, value] : j.items()) {
    if (!kSections.contains(key)) throw ConfigError(key, "unknown top-level key");
  }

  SimConfig c;

  Section sw(j, "swimmer", true);
  c.swimmer.v = sw.number("v");
  c.swimmer.omega_par_0 = sw.number("omega_par_0");
  c.swimmer.omega_perp_0 = sw.number("omega_perp_0");
  c.swimmer.omega_par_1 = sw.number("omega_par_1");
  c.swimmer.omega_perp_1 = sw.number("omega_perp_1");
  sw.finish();
  checked([&] { c.swimmer.validate(); });

  Section fi(j, "filter", true);
  c.filter.sigma1 = fi.number("sigma1");
  c.filter.sigma2 = fi.number("sigma2");
  c.filter.mu = fi.number("mu");
  c.filter.rho_max = fi.number("rho_max", 1e6);
  fi.finish();
  checked([&] { c.filter.validate(); });

  Section fd(j, "field", true);
  try {
    c.field.variant = field_variant_from_string(fd.string("variant"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("field.variant", e.what());
  }
  c.field.source = fd.vec3("source", {});
  c.field.l0 = fd.number("l0", 1.0);
  c.field.clamp_radius = fd.number("clamp_radius", 0.01 * c.field.l0);
  c.field.direction = fd.vec3("direction", {1.0, 0.0, 0.0});
  c.field.slope = fd.number("slope", 1.0);
  c.field.c0 = fd.number("c0", 1.0);
  c.field.width = fd.number("width", 1.0);
  c.field.peak = fd.number("peak", 1.0);
  fd.finish();
  checked([&] { c.field.validate(); });

  Section no(j, "noise", false);
  try {
    c.noise.kind = noise_kind_from_string(no.string("kind", "none"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("noise.kind", e.what());
  }
  c.noise.std_dev = no.number("std", 0.0);
  c.noise.seed = no.integer("seed", 0);
  no.finish();
  checked([&] { c.noise.validate(); });

  Section si(j, "sim", true);
  c.sim.dt = si.number("dt", c.swimmer.period() / 200.0);
  c.sim.t_end = si.number("t_end");
  c.sim.record_stride = si.integer("record_stride", 1);
  c.sim.renorm_stride = si.integer("renorm_stride", 1);
  si.finish();
  if (!(c.sim.dt > 0.0)) throw ConfigError("sim.dt", "must be > 0");
  if (!(c.sim.t_end >= c.sim.dt)) throw ConfigError("sim.t_end", "must be >= sim.dt");
  if (c.sim.record_stride < 1) throw ConfigError("sim.record_stride", "must be >= 1");
  if (c.sim.renorm_stride < 1) throw ConfigError("sim.renorm_stride", "must be >= 1");

  Section in(j, "init", false);
  c.init_pose.p = in.vec3("p", {});
  c.init_pose.R = in.mat3("R", Mat3::identity());
  c.init_filter.zeta1 = in.number("zeta1", 0.0);
  c.init_filter.zeta2 = in.number("zeta2", 0.0);
  c.init_filter.rho = in.number("rho", 1.0);
  in.finish();

  checked([&] { c.validate(); });
  return c;
}

json config_to_json(const SimConfig& c) {
  json j;
  j["swimmer"] = {{"v", c.swimmer.v},
                  {"omega_par_0", c.swimmer.omega_par_0},
                  {"omega_perp_0", c.swimmer.omega_perp_0},
                  {"omega_par_1", c.swimmer.omega_par_1},
                  {"omega_perp_1", c.swimmer.omega_perp_1}};
  j["filter"] = {{"sigma1", c.filter.sigma1},
                 {"sigma2", c.filter.sigma2},
                 {"mu", c.filter.mu},
                 {"rho_max", c.filter.rho_max}};
  json field = {{"variant", std::string(to_string(c.field.variant))},
                {"source", to_json(c.field.source)},
                {"clamp_radius", c.field.clamp_radius}};
  switch (c.field.variant) {
    case FieldVariant::RadialInverse:
      field["l0"] = c.field.l0;
      break;
    case FieldVariant::Linear:
      field["direction"] = to_json(c.field.direction);
      field["slope"] = c.field.slope;
      field["c0"] = c.field.c0;
      break;
    case FieldVariant::Gaussian:
      field["width"] = c.field.width;
      field["peak"] = c.field.peak;
      break;
    case FieldVariant::Uniform:
      field["c0"] = c.field.c0;
      break;
  }
  j["field"] = field;
  j["noise"] = {{"kind", std::string(to_string(c.noise.kind))},
                {"std", c.noise.std_dev},
                {"seed", c.noise.seed}};
  j["sim"] = {{"dt", c.sim.dt},
              {"t_end", c.sim.t_end},
              {"record_stride", c.sim.record_stride},
              {"renorm_stride", c.sim.renorm_stride}};
  j["init"] = {{"p", to_json(c.init_pose.p)},
               {"R", to_json(c.init_pose.R)},
               {"zeta1", c.init_filter.zeta1},
               {"zeta2", c.init_filter.zeta2},
               {"rho", c.init_filter.rho}};
  return j;
}

std::string canonical_dump(const SimConfig& config) { return config_to_json(config).dump(2) + "\n"; }

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

void save_config(const SimConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << canonical_dump(config);
}

void set_numeric_leaf(json& j, const std::string& path, double value) {
  json* node = &j;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (node->is_object()) {
      if (!node->contains(part)) throw ConfigError(path, "unknown parameter path");
      node = &(*node)[part];
    } else if (node->is_array()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(part, &used);
        if (used != part.size()) throw std::invalid_argument(part);
      } catch (const std::exception&) {
        throw ConfigError(path, "expected an array index at '" + part + "'");
      }
      if (idx >= node->size()) throw ConfigError(path, "array index out of range");
      node = &(*node)[idx];
    } else {
      throw ConfigError(path, "unknown parameter path");
    }
  }
  if (!node->is_number()) throw ConfigError(path, "not a numeric leaf");
  if (node->is_number_integer() && value == std::floor(value) && value >= 0.0) {
    *node = static_cast<std::uint64_t>(value);
  } else {
    *node = value;
  }
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

SimConfig fig2_config(double l0) {
  SimConfig c;
  c.swimmer = {l0, -5.0, -7.0, -5.0, -1.0};
  const double w = c.swimmer.omega();
  c.filter = {2.0 / w, 1.0 / w, 1.0 / (3.0 * w), 1e6};
  c.field.variant = FieldVariant::RadialInverse;
  c.field.l0 = l0;
  c.field.clamp_radius = 0.2 * l0;
  c.sim.dt = c.swimmer.period() / 200.0;
  c.sim.t_end = 30.0;
  c.sim.record_stride = 1;
  c.sim.renorm_stride = 1;
  c.init_pose.p = {-l0, -l0, -3.5 * l0};
  c.init_pose.R = Mat3::identity();
  const double c_init = concentration(c.field, c.init_pose.p);
  c.init_filter = {0.75 * c_init, 1.25 * c_init, 1.0};
  return c;
}

void make_planar(SimConfig& config) {
  config.swimmer.omega_par_0 = 0.0;
  config.swimmer.omega_par_1 = 0.0;
}

}  // namespace helixseek
