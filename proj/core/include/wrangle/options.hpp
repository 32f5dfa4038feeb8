#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace wrangle {

/// String-keyed assistant configuration ("lambda_lin" -> "0.1").
/// Values are parsed on access so every front end can pass flags through
/// unchanged.
class Options {
 public:
  Options() = default;
  Options(std::initializer_list<std::pair<const std::string, std::string>> init)
      : values_(init) {}

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::optional<std::string> get(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_seed(std::uint64_t fallback = 0) const;

  const std::map<std::string, std::string>& values() const { return values_; }

  bool operator==(const Options&) const = default;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace wrangle
