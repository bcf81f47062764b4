#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "bvi/harness.hpp"

namespace bvi {

void configure_logging() {
  // Traces may go to stdout, so logging always goes to stderr.
  auto logger = spdlog::stderr_color_mt("bvi");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);

  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("VI_LOG")) {
    const std::string name = env;
    const auto parsed = spdlog::level::from_str(name);
    // from_str maps unknown names to off.
    if (parsed != spdlog::level::off || name == "off") {
      level = parsed;
    } else {
      spdlog::warn("ignoring unknown VI_LOG level '{}'", name);
    }
  }
  spdlog::set_level(level);
}

}  // namespace bvi
