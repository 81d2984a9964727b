#pragma once

#include <string>
#include <vector>

#include "caus/space.hpp"

namespace caus {

// Named spaces used throughout the worked examples. Binary inputs unless the
// name says otherwise.
SpacePtr builtin_space(const std::string& name);
std::vector<std::string> builtin_space_names();

// default output set sizes for a builtin space (binary except where fixed)
std::vector<int> builtin_outputs(const std::string& name);

}  // namespace caus
