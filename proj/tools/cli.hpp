#pragma once

#include <ostream>

namespace rank1horn {

// Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 failed
// verification.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rank1horn
