#pragma once

#include "wrangle/assistant.hpp"

namespace wrangle {

/// datadiff, csv-dialect, ptype, semantic-type, outlier and aggregates.
Registry default_registry();

}  // namespace wrangle
