#pragma once

#include <string>
#include <string_view>

#include "meanx/generator.hpp"
#include "meanx/mean.hpp"

namespace meanx {

// Text forms:
//   mean := power:R | qa:GEN | gini:R,S | conj(GEN,MEAN) | ext(MEAN)
//         | custom:min | custom:max
//   GEN  := power:R | log | exp:A
// R, S and A are decimal literals. Anything left over after a complete
// descriptor is a ParseError.

MeanDescriptor parse_mean(std::string_view text);
GeneratorDescriptor parse_generator(std::string_view text);

/// Canonical text; parse_mean(to_string(m)) == m for every parseable m.
std::string to_string(const MeanDescriptor& mean);
std::string to_string(const GeneratorDescriptor& gen);

/// min(x) and max(x) as custom means on the real line. Both carry every flag
/// (which is false for strictness) so that verify_flags has something to catch.
const MeanDescriptor& min_mean();
const MeanDescriptor& max_mean();

}  // namespace meanx
