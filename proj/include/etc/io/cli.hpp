#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace etc::io {

/// etc_sim run|compare|certify|validate <scenario-path|builtin-name> [--dt S] [--out DIR] [--seed N]
///
/// Exit status: 0 on success, 1 for parse/validation errors or failed checks,
/// 2 when the simulation diverges or looks Zeno.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace etc::io
