#pragma once

#include <string_view>

#include <fmt/format.h>

namespace backnet::log {

enum class Level { error = 0, info = 1, debug = 2 };

// Read once from BACKNET_LOG (error|info|debug); defaults to error.
Level threshold();
void write(Level level, std::string_view message);

template <typename... Args>
void info(fmt::format_string<Args...> f, Args&&... args) {
    if (threshold() >= Level::info) write(Level::info, fmt::format(f, std::forward<Args>(args)...));
}

template <typename... Args>
void debug(fmt::format_string<Args...> f, Args&&... args) {
    if (threshold() >= Level::debug) write(Level::debug, fmt::format(f, std::forward<Args>(args)...));
}

template <typename... Args>
void error(fmt::format_string<Args...> f, Args&&... args) {
    write(Level::error, fmt::format(f, std::forward<Args>(args)...));
}

}  // namespace backnet::log
