#pragma once

#include "etc/sim/simulator.hpp"

#include <string>

namespace etc::io {

/// Static SVG 1.1 figure: state and estimate traces, ||x|| and ||z||, held
/// inputs, and a cumulative trigger step plot per node. Long series are
/// decimated with a fixed stride, so output depends only on the result.
std::string render_svg(const sim::SimulationResult& result, const std::string& title);

}  // namespace etc::io
