#include "doctest.h"

#include <fstream>
#include <sstream>

#include "helixseek/config.hpp"

using namespace helixseek;
using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::filesystem::path kConfigs = HELIXSEEK_SOURCE_DIR "/configs";

std::string error_key(const json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("bundled radial config is the canonical built-in scenario") {
  CHECK(read_file(kConfigs / "fig2.json") == canonical_dump(fig2_config()));
  const SimConfig c = load_config(kConfigs / "fig2.json");
  CHECK(c.swimmer.omega_perp_0 == -7.0);
  CHECK(c.field.clamp_radius == 40.0);
  CHECK(c.init_pose.p.z == -700.0);
}

TEST_CASE("canonical serialization round-trips byte for byte") {
  for (const char* name : {"fig2.json", "planar_linear.json"}) {
    const SimConfig c = load_config(kConfigs / name);
    const std::string once = canonical_dump(c);
    const std::string twice = canonical_dump(config_from_json(json::parse(once)));
    CAPTURE(name);
    CHECK(once == twice);
    CHECK(once.back() == '\n');
  }

  // Key order in the input does not matter.
  const json j = json::parse(read_file(kConfigs / "planar_linear.json"));
  std::string reordered = "{";
  bool first = true;
  for (auto it = j.rbegin(); it != j.rend(); ++it) {
    if (!first) reordered += ",";
    reordered += json(it.key()).dump() + ":" + it.value().dump();
    first = false;
  }
  reordered += "}";
  CHECK(canonical_dump(config_from_json(json::parse(reordered))) == canonical_dump(config_from_json(j)));
}

TEST_CASE("defaults") {
  const SimConfig c = load_config(kConfigs / "planar_linear.json");
  CHECK(c.sim.dt == doctest::Approx(c.swimmer.period() / 200.0).epsilon(1e-15));
  CHECK(c.filter.rho_max == 1e6);
  CHECK(c.sim.record_stride == 1);
  CHECK(c.noise.kind == NoiseKind::None);
}

TEST_CASE("schema violations name the offending key") {
  const json base = config_to_json(fig2_config());

  json j = base;
  j["extra"] = 1;
  CHECK(error_key(j) == "extra");

  j = base;
  j["swimmer"]["omega_par_2"] = 1.0;
  CHECK(error_key(j) == "swimmer.omega_par_2");

  j = base;
  j["sim"]["dt"] = 0.0;
  CHECK(error_key(j) == "sim.dt");

  j = base;
  j["sim"].erase("t_end");
  CHECK(error_key(j) == "sim.t_end");

  j = base;
  j.erase("filter");
  CHECK(error_key(j) == "filter");

  j = base;
  j["field"]["variant"] = "spherical";
  CHECK(error_key(j) == "field.variant");

  j = base;
  j["sim"]["record_stride"] = 1.5;
  CHECK(error_key(j) == "sim.record_stride");

  j = base;
  j["swimmer"]["v"] = "fast";
  CHECK(error_key(j) == "swimmer.v");

  j = base;
  j["filter"]["sigma2"] = 1.0;  // larger than sigma1
  CHECK(error_key(j) == "filter.sigma1");

  CHECK(error_key(base) == "<none>");
}

TEST_CASE("malformed files are config errors") {
  const auto dir = std::filesystem::temp_directory_path() / "helixseek_test_config";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "broken.json") << "{\"swimmer\": ";
  CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("numeric leaves can be replaced by dotted path") {
  json j = config_to_json(fig2_config());
  set_numeric_leaf(j, "filter.sigma1", 0.5);
  CHECK(j["filter"]["sigma1"] == 0.5);
  set_numeric_leaf(j, "init.p.2", -10.0);
  CHECK(j["init"]["p"][2] == -10.0);
  set_numeric_leaf(j, "init.R.1.1", 1.0);
  CHECK(j["init"]["R"][1][1] == 1.0);
  CHECK_THROWS_AS(set_numeric_leaf(j, "filter.sigma3", 1.0), ConfigError);
  CHECK_THROWS_AS(set_numeric_leaf(j, "field.variant", 1.0), ConfigError);
  CHECK_THROWS_AS(set_numeric_leaf(j, "init.p.3", 1.0), ConfigError);
  CHECK_THROWS_AS(set_numeric_leaf(j, "filter", 1.0), ConfigError);
}

TEST_CASE("sha256 digests") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const std::string text = canonical_dump(fig2_config());
  CHECK(sha256_hex(text) == sha256_hex(read_file(kConfigs / "fig2.json")));
}

TEST_CASE("planar variant") {
  SimConfig c = fig2_config();
  make_planar(c);
  CHECK(c.swimmer.omega_par_0 == 0.0);
  CHECK(c.swimmer.omega_par_1 == 0.0);
  CHECK(c.swimmer.omega_perp_0 == -7.0);
}
