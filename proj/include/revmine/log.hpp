#ifndef REVMINE_LOG_HPP
#define REVMINE_LOG_HPP

#include <string>

namespace revmine {

enum class LogLevel { quiet = 0, warn = 1, info = 2, debug = 3 };

/// Level from the REVMINE_LOG environment variable (quiet|warn|info|debug or
/// 0..3), read once; defaults to warn. Messages go to stderr so primary
/// command output stays clean.
LogLevel log_level();

void log_warn(const std::string& message);
void log_info(const std::string& message);
void log_debug(const std::string& message);

}  // namespace revmine

#endif  // REVMINE_LOG_HPP
