#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qpinem::cli {

// Exit codes: 0 ok, 1 configuration/validation, 2 numerical, 3 I/O.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qpinem::cli
