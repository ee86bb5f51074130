#include "dgama/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace dgama {

LogLevel log_level() {
  static LogLevel level = [] {
    const char* v = std::getenv("DGAMA_LOG");
    if (v && std::strcmp(v, "quiet") == 0) return LogLevel::quiet;
    if (v && std::strcmp(v, "debug") == 0) return LogLevel::debug;
    return LogLevel::info;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::fprintf(stderr, "[dgama] %s\n", msg.c_str());
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::debug)
    std::fprintf(stderr, "[dgama] %s\n", msg.c_str());
}

}  // namespace dgama
