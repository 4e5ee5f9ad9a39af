#include "backnet/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <string>

namespace backnet::log {

Level threshold() {
    static const Level level = [] {
        const char* env = std::getenv("BACKNET_LOG");
        const std::string value = env ? env : "";
        if (value == "debug") return Level::debug;
        if (value == "info") return Level::info;
        return Level::error;
    }();
    return level;
}

void write(Level level, std::string_view message) {
    static std::mutex mutex;
    const char* tag = level == Level::error ? "error" : level == Level::info ? "info" : "debug";
    std::lock_guard lock(mutex);
    fmt::print(stderr, "[{}] {}\n", tag, message);
}

}  // namespace backnet::log
