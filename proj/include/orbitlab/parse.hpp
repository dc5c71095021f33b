#pragma once

#include <string>
#include <vector>

#include "orbitlab/num_core.hpp"

namespace orbitlab {

/// Whole-string real literal; throws InvalidInput otherwise.
double parse_real(const std::string& s);
/// "a", "bi", "a+bi", "a-bi", "i".
cplx parse_complex(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

}  // namespace orbitlab
