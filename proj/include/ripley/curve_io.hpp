// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "ripley/estimators.hpp"

namespace ripley {

/// Curve CSV: `# statistic=<s> correction=<c> rho=<rho> n=<n> bandwidth=<b>`,
/// then a `r,value` header row and one row per grid point.
void write_curve_csv(std::ostream& out, const CurveEstimate& curve);
CurveEstimate read_curve_csv(std::istream& in);

void save_curve(const std::string& path, const CurveEstimate& curve);
CurveEstimate load_curve(const std::string& path);

}  // namespace ripley
