#pragma once

namespace routeseal {

// Entry point for the `routeseal` command-line tool.
// Exit codes: 0 success, 1 pipeline error, 2 usage error, 13 tampering detected.
int cli_main(int argc, const char* const* argv);

}  // namespace routeseal
