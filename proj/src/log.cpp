#include "tubelab/log.hpp"

#include <cstdlib>
#include <mutex>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace tubelab::log {

namespace {

std::shared_ptr<spdlog::logger> logger() {
  static std::once_flag once;
  static std::shared_ptr<spdlog::logger> lg;
  std::call_once(once, [] {
    lg = spdlog::stderr_color_mt("tubelab");
    lg->set_pattern("[%l] %v");
    lg->set_level(spdlog::level::warn);
  });
  return lg;
}

}  // namespace

void init() {
  auto lg = logger();
  const char* env = std::getenv("TUBELAB_LOG");
  if (!env) return;
  const std::string v = env;
  if (v == "error") lg->set_level(spdlog::level::err);
  else if (v == "warn") lg->set_level(spdlog::level::warn);
  else if (v == "info") lg->set_level(spdlog::level::info);
  else if (v == "debug") lg->set_level(spdlog::level::debug);
  else lg->warn("ignoring unknown TUBELAB_LOG value '{}'", v);
}

void debug(const std::string& msg) { logger()->debug(msg); }
void info(const std::string& msg) { logger()->info(msg); }
void warn(const std::string& msg) { logger()->warn(msg); }
void error(const std::string& msg) { logger()->error(msg); }

}  // namespace tubelab::log
