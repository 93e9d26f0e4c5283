#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace csturm::cli {

// Exit codes: 0 success, 1 usage error, 2 domain error (including
// indeterminate classification).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace csturm::cli
