#pragma once

#include <ostream>

namespace twobox {

// Exit codes of the command-line interface.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;  // verify failed, no isomorphism, unclassified, computation error
inline constexpr int kExitUsage = 2;     // bad arguments, unreadable or malformed files

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twobox
