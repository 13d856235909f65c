#pragma once

#include <string>
#include <string_view>

namespace softtouch::log {

// Thin wrappers so spdlog stays an implementation detail of the core library.

void debug(std::string_view msg);
void info(std::string_view msg);
void warn(std::string_view msg);
void error(std::string_view msg);

/// Accepts trace, debug, info, warn, err, critical, off.
void set_level(std::string_view level);
/// Reads SOFTTOUCH_LOG when set; defaults to `fallback`.
void init_from_env(std::string_view fallback = "warn");

}  // namespace softtouch::log
