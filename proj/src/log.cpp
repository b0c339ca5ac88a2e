#include "revmine/log.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

namespace revmine {
namespace {

LogLevel parse_level(const char* raw) {
  if (raw == nullptr) return LogLevel::warn;
  std::string value(raw);
  for (char& c : value) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  if (value == "quiet" || value == "0") return LogLevel::quiet;
  if (value == "warn" || value == "1") return LogLevel::warn;
  if (value == "info" || value == "2") return LogLevel::info;
  if (value == "debug" || value == "3") return LogLevel::debug;
  return LogLevel::warn;
}

}  // namespace

LogLevel log_level() {
  static const LogLevel level = parse_level(std::getenv("REVMINE_LOG"));
  return level;
}

void log_warn(const std::string& message) {
  if (log_level() >= LogLevel::warn) std::cerr << "warning: " << message << "\n";
}

void log_info(const std::string& message) {
  if (log_level() >= LogLevel::info) std::cerr << "info: " << message << "\n";
}

void log_debug(const std::string& message) {
  if (log_level() >= LogLevel::debug) std::cerr << "debug: " << message << "\n";
}

}  // namespace revmine
