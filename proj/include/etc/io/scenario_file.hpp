#pragma once

#include "etc/sim/scenario.hpp"

#include <string>
#include <string_view>

namespace etc::io {

/// Parses the line-oriented scenario format:
///
///   [section]
///   key = value        # comment
///
/// Matrices are written row by row with ';' between rows. Throws ParseError
/// (with the offending line) or ValidationError.
sim::Scenario parse_scenario(std::string_view document);

/// Inverse of parse_scenario; numbers use the shortest round-trip form.
std::string serialize_scenario(const sim::Scenario& s);

/// A builtin scenario name, or a path to a scenario file.
sim::Scenario load_scenario(const std::string& name_or_path);

std::string read_file(const std::string& path);

}  // namespace etc::io
