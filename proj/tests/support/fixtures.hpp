#pragma once

#include <string>

namespace wrangle::testing {

inline std::string fixture(const std::string& name) {
  return std::string(WRANGLE_FIXTURE_DIR) + "/" + name;
}

}  // namespace wrangle::testing
