#pragma once

#include <iosfwd>

namespace llx::cli {

// Exit codes: 0 positive verdict or success, 1 negative verdict, 2 error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace llx::cli
