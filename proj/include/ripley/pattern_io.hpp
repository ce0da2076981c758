// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "ripley/geometry.hpp"

namespace ripley {

/// Pattern CSV: a header `# d=<d> n=<n>` followed by one point per line with
/// d comma-separated coordinates. An optional `lower=<c1>,...,<cd>` header
/// field gives the window's lower corner for files written in an uncentered
/// frame; such patterns are translated onto the centered window.
void write_pattern_csv(std::ostream& out, const PointPattern& pattern);
PointPattern read_pattern_csv(std::istream& in);

void save_pattern(const std::string& path, const PointPattern& pattern);
PointPattern load_pattern(const std::string& path);

}  // namespace ripley
