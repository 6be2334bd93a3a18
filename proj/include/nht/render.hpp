#pragma once

#include <string>

#include "nht/driver.hpp"

namespace nht {

// Deterministic SVG rendering of a dichotomy result: orbit ball, generator
// axes (fixed-point markers for parabolics), and the witness configuration.
// H2 uses the half-plane view; trees use a radial layout. H3 is unsupported.
std::string render_svg(const Dichotomy& d, int depth = 3);

}  // namespace nht
