#include "softtouch/logging.hpp"

#include <cstdlib>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace softtouch::log {

namespace {
std::shared_ptr<spdlog::logger>& logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto l = spdlog::stderr_color_mt("softtouch");
    l->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
    l->set_level(spdlog::level::warn);
    return l;
  }();
  return instance;
}
}  // namespace

void debug(std::string_view msg) { logger()->debug(msg); }
void info(std::string_view msg) { logger()->info(msg); }
void warn(std::string_view msg) { logger()->warn(msg); }
void error(std::string_view msg) { logger()->error(msg); }

void set_level(std::string_view level) {
  logger()->set_level(spdlog::level::from_str(std::string(level)));
}

void init_from_env(std::string_view fallback) {
  const char* env = std::getenv("SOFTTOUCH_LOG");
  set_level(env && *env ? std::string_view(env) : fallback);
}

}  // namespace softtouch::log
