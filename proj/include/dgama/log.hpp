#pragma once

#include <string>

namespace dgama {

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

/// Verbosity from the DGAMA_LOG environment variable (quiet|info|debug),
/// read once per process. Defaults to info.
LogLevel log_level();

void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace dgama
