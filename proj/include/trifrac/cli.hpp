#pragma once

namespace trifrac {

inline constexpr const char* kVersion = "0.1.0";

/// Command-line surface: run | calibrate | geometry | version.
/// Exit codes: 0 success, 1 user error, 2 runtime failure.
int cli_dispatch(int argc, const char* const* argv);

}  // namespace trifrac
