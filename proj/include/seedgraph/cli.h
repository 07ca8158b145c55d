#pragma once

#include <ostream>

namespace seedgraph {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitSearchError = 4;

// Entry point behind the `seedgraph` executable: subcommands expand, retrieve,
// topics, eval and pipeline.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace seedgraph
