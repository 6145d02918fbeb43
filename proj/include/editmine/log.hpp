#pragma once

#include <string>

namespace editmine {

// Stderr logging; level comes from EDITMINE_LOG (error, warn, info, debug),
// default warn.
enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

LogLevel log_level();
void log(LogLevel level, const std::string& msg);

inline void log_error(const std::string& m) { log(LogLevel::error, m); }
inline void log_warn(const std::string& m) { log(LogLevel::warn, m); }
inline void log_info(const std::string& m) { log(LogLevel::info, m); }
inline void log_debug(const std::string& m) { log(LogLevel::debug, m); }

}  // namespace editmine
