#include "meanx/format.hpp"

#include <charconv>
#include <cmath>

namespace meanx {

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_reals(std::span<const double> vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i > 0) out += ',';
    out += format_real(vs[i]);
  }
  return out;
}

}  // namespace meanx
