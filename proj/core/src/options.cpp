#include "wrangle/options.hpp"

#include <charconv>

#include "wrangle/encoding.hpp"
#include "wrangle/error.hpp"

namespace wrangle {

std::optional<std::string> Options::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Options::get_string(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double Options::get_double(const std::string& key, double fallback) const {
  auto text = get(key);
  if (!text) return fallback;
  auto trimmed = trim(*text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
  if (ec != std::errc{} || ptr != trimmed.data() + trimmed.size())
    throw Error(ErrorCode::invalid_argument, "option " + key + " is not a number: " + *text);
  return value;
}

std::int64_t Options::get_int(const std::string& key, std::int64_t fallback) const {
  auto text = get(key);
  if (!text) return fallback;
  auto trimmed = trim(*text);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
  if (ec != std::errc{} || ptr != trimmed.data() + trimmed.size())
    throw Error(ErrorCode::invalid_argument, "option " + key + " is not an integer: " + *text);
  return value;
}

std::uint64_t Options::get_seed(std::uint64_t fallback) const {
  return static_cast<std::uint64_t>(get_int("seed", static_cast<std::int64_t>(fallback)));
}

}  // namespace wrangle
