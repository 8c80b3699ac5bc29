// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MLMBIAS_LOGGING_HPP_
#define MLMBIAS_LOGGING_HPP_

#include <spdlog/spdlog.h>

#include <utility>

namespace mlmbias::log {

// Stderr logger; level taken from MLMBIAS_LOG (trace, debug, info, warn,
// error, off). Defaults to warn.
spdlog::logger& logger();

template <typename... Args>
void debug(fmt::format_string<Args...> fmt, Args&&... args) {
  logger().debug(fmt, std::forward<Args>(args)...);
}

template <typename... Args>
void info(fmt::format_string<Args...> fmt, Args&&... args) {
  logger().info(fmt, std::forward<Args>(args)...);
}

template <typename... Args>
void warn(fmt::format_string<Args...> fmt, Args&&... args) {
  logger().warn(fmt, std::forward<Args>(args)...);
}

template <typename... Args>
void error(fmt::format_string<Args...> fmt, Args&&... args) {
  logger().error(fmt, std::forward<Args>(args)...);
}

}  // namespace mlmbias::log

#endif  // MLMBIAS_LOGGING_HPP_
