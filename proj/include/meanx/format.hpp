#pragma once

#include <span>
#include <string>

namespace meanx {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_real(double v);

/// Comma-separated format_real of each entry.
std::string format_reals(std::span<const double> vs);

}  // namespace meanx
