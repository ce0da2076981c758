// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "ripley/limit.hpp"

namespace ripley {

/// Writes grid.csv, mean.csv, covariance.csv (dense, row-major) and
/// provenance.json into `directory`, creating it if needed.
void save_limit(const std::string& directory, const LimitModel& limit);

/// Reads a directory written by save_limit and validates the result.
LimitModel load_limit(const std::string& directory);

}  // namespace ripley
