#pragma once

#include <iosfwd>

namespace slice4d {

/// Entry point of the slice4d tool. Exit codes: 0 success, 1 internal
/// consistency failure (or failed validation), 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slice4d
