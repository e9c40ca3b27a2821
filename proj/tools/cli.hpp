#pragma once

#include <iosfwd>

namespace finiteshape {

// Exit codes: 0 all checks passed, 1 a check failed, 2 usage or
// configuration error, 3 input/output or stage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace finiteshape
