#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ambsee/units.hpp"

namespace ambsee {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

enum class EavesdropperPlacement { UniformDisk, Fixed };

/// Network and radio parameters for one family of random drops. All powers
/// are in watts, distances in meters, rates in bits/s/Hz.
struct NetworkConfig {
  std::size_t user_count = 2;      // K
  std::size_t bd_count = 1;        // M
  double user_radius = 50.0;
  double bd_radius = 5.0;
  double pathloss_exponent = 3.0;  // gamma
  double noise_power = 1e-6;       // sigma_k^2, -30 dBm
  double eav_noise_power = 1e-6;   // sigma_e^2
  double r_min = 1.0;
  std::vector<double> r_min_per_user;  // overrides r_min when non-empty, indexed by drop order
  double p_max = 100.0;            // 50 dBm
  double p_circuit = 1.0;          // 30 dBm
  double min_distance = 0.1;
  EavesdropperPlacement eav_placement = EavesdropperPlacement::UniformDisk;
  Point eav_fixed{};
  std::uint64_t seed = 1;

  double user_rate_floor(std::size_t k) const {
    return r_min_per_user.empty() ? r_min : r_min_per_user.at(k);
  }

  void validate() const {
    if (user_count < 1) throw std::invalid_argument("user_count must be >= 1");
    if (!(user_radius > 0.0) || !(bd_radius > 0.0)) throw std::invalid_argument("radii must be > 0");
    if (!(pathloss_exponent > 0.0)) throw std::invalid_argument("pathloss exponent must be > 0");
    if (!(noise_power > 0.0) || !(eav_noise_power > 0.0)) throw std::invalid_argument("noise powers must be > 0");
    if (!(p_max > 0.0) || !(p_circuit > 0.0)) throw std::invalid_argument("p_max and p_circuit must be > 0");
    if (!(min_distance > 0.0)) throw std::invalid_argument("min_distance must be > 0");
    if (!(r_min >= 0.0)) throw std::invalid_argument("r_min must be >= 0");
    if (!r_min_per_user.empty()) {
      if (r_min_per_user.size() != user_count) throw std::invalid_argument("r_min_per_user size must equal K");
      for (double r : r_min_per_user) {
        if (!(r >= 0.0)) throw std::invalid_argument("per-user r_min must be >= 0");
      }
    }
  }
};

namespace detail {

inline double power_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_power(j.get<std::string>());
  throw std::invalid_argument("power value must be a number (watts) or a string such as \"50dBm\"");
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const NetworkConfig& c) {
  j = nlohmann::json{{"k", c.user_count},
                     {"m", c.bd_count},
                     {"user_radius", c.user_radius},
                     {"bd_radius", c.bd_radius},
                     {"pathloss_exponent", c.pathloss_exponent},
                     {"noise_power", c.noise_power},
                     {"eav_noise_power", c.eav_noise_power},
                     {"r_min", c.r_min},
                     {"p_max", c.p_max},
                     {"p_circuit", c.p_circuit},
                     {"min_distance", c.min_distance},
                     {"seed", c.seed}};
  if (!c.r_min_per_user.empty()) j["r_min_per_user"] = c.r_min_per_user;
  if (c.eav_placement == EavesdropperPlacement::Fixed) {
    j["eavesdropper"] = {{"placement", "fixed"}, {"x", c.eav_fixed.x}, {"y", c.eav_fixed.y}};
  } else {
    j["eavesdropper"] = {{"placement", "uniform"}};
  }
}

/// Reads any subset of the keys written by to_json; missing keys keep their
/// current values. Power keys accept watts or "<x>dBm" strings.
inline void from_json(const nlohmann::json& j, NetworkConfig& c) {
  static const char* known[] = {"k", "m", "user_radius", "bd_radius", "pathloss_exponent", "noise_power",
                                "eav_noise_power", "r_min", "r_min_per_user", "p_max", "p_circuit",
                                "min_distance", "seed", "eavesdropper"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw std::invalid_argument("unknown network config key: " + it.key());
  }
  if (j.contains("k")) c.user_count = j.at("k").get<std::size_t>();
  if (j.contains("m")) c.bd_count = j.at("m").get<std::size_t>();
  if (j.contains("user_radius")) c.user_radius = j.at("user_radius").get<double>();
  if (j.contains("bd_radius")) c.bd_radius = j.at("bd_radius").get<double>();
  if (j.contains("pathloss_exponent")) c.pathloss_exponent = j.at("pathloss_exponent").get<double>();
  if (j.contains("noise_power")) {
    c.noise_power = detail::power_from_json(j.at("noise_power"));
    if (!j.contains("eav_noise_power")) c.eav_noise_power = c.noise_power;
  }
  if (j.contains("eav_noise_power")) c.eav_noise_power = detail::power_from_json(j.at("eav_noise_power"));
  if (j.contains("r_min")) c.r_min = j.at("r_min").get<double>();
  if (j.contains("r_min_per_user")) c.r_min_per_user = j.at("r_min_per_user").get<std::vector<double>>();
  if (j.contains("p_max")) c.p_max = detail::power_from_json(j.at("p_max"));
  if (j.contains("p_circuit")) c.p_circuit = detail::power_from_json(j.at("p_circuit"));
  if (j.contains("min_distance")) c.min_distance = j.at("min_distance").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("eavesdropper")) {
    const auto& e = j.at("eavesdropper");
    std::string placement = e.value("placement", "uniform");
    if (placement == "fixed") {
      c.eav_placement = EavesdropperPlacement::Fixed;
      c.eav_fixed = Point{e.at("x").get<double>(), e.at("y").get<double>()};
    } else if (placement == "uniform") {
      c.eav_placement = EavesdropperPlacement::UniformDisk;
    } else {
      throw std::invalid_argument("eavesdropper.placement must be 'uniform' or 'fixed'");
    }
  }
}

}  // namespace ambsee
