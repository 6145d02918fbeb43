#include "editmine/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace editmine {

LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("EDITMINE_LOG");
    if (!env) return LogLevel::warn;
    if (!std::strcmp(env, "error")) return LogLevel::error;
    if (!std::strcmp(env, "info")) return LogLevel::info;
    if (!std::strcmp(env, "debug")) return LogLevel::debug;
    return LogLevel::warn;
  }();
  return level;
}

void log(LogLevel level, const std::string& msg) {
  if (level > log_level()) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::fprintf(stderr, "editmine [%s] %s\n", names[static_cast<int>(level)],
               msg.c_str());
}

}  // namespace editmine
