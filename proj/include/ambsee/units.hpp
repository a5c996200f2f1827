#pragma once

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ambsee {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

/// Parses a power quantity given either in watts ("100", "100W") or in dBm
/// ("50dBm"). Internal math is always in watts; this is the only place where
/// the log domain is accepted.
inline double parse_power(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty power value");

  auto ends_with_ci = [&](std::string_view suffix) {
    if (text.size() < suffix.size()) return false;
    auto tail = text.substr(text.size() - suffix.size());
    for (std::size_t i = 0; i < suffix.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(tail[i])) != suffix[i]) return false;
    }
    return true;
  };

  bool dbm = false;
  if (ends_with_ci("dbm")) {
    dbm = true;
    text.remove_suffix(3);
  } else if (ends_with_ci("w")) {
    text.remove_suffix(1);
  }
  text = trim(text);

  std::string number(text);
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(number, &consumed);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed power value: '" + number + "'");
  }
  if (consumed != number.size()) throw std::invalid_argument("malformed power value: '" + number + "'");
  return dbm ? dbm_to_watts(value) : value;
}

}  // namespace ambsee
