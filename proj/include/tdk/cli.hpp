/// @file cli.hpp
/// @brief Command-line front end.
///
/// Exit codes: 0 all verdicts pass (or nothing to judge), 1 at least one
/// verdict failed, 2 any error (unreadable config, bad flags, aborted run).
/// Errors are reported as a single JSON line on stderr:
///   {"kind": "<error-kind>", "message": "..."}

#pragma once

namespace tdk {

int run_cli(int argc, char** argv);

}  // namespace tdk
