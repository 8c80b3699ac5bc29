// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlmbias/logging.hpp"

#include <spdlog/sinks/stdout_sinks.h>

#include <cstdlib>
#include <memory>
#include <string>

namespace mlmbias::log {

spdlog::logger& logger() {
  static const std::shared_ptr<spdlog::logger> instance = [] {
    auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
    auto l = std::make_shared<spdlog::logger>("mlmbias", sink);
    l->set_pattern("[%l] %v");
    l->set_level(spdlog::level::warn);
    if (const char* env = std::getenv("MLMBIAS_LOG")) {
      const auto level = spdlog::level::from_str(env);
      // from_str maps unknown names to off; only honour recognised ones.
      if (level != spdlog::level::off || std::string(env) == "off") {
        l->set_level(level);
      }
    }
    return l;
  }();
  return *instance;
}

}  // namespace mlmbias::log
