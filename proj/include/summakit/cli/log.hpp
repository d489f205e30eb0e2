#pragma once

// Minimal leveled logger for the command-line front end. Verbosity comes
// from SUMMAKIT_LOG (quiet, error, warn, info, debug or 0-4); default warn.

#include <cstdlib>
#include <iostream>
#include <string>
#include <string_view>

namespace summakit::cli {

enum class LogLevel { quiet = 0, error = 1, warn = 2, info = 3, debug = 4 };

inline LogLevel parse_log_level(std::string_view text, LogLevel fallback = LogLevel::warn) {
    if (text == "quiet" || text == "0") return LogLevel::quiet;
    if (text == "error" || text == "1") return LogLevel::error;
    if (text == "warn" || text == "2") return LogLevel::warn;
    if (text == "info" || text == "3") return LogLevel::info;
    if (text == "debug" || text == "4") return LogLevel::debug;
    return fallback;
}

class Logger {
public:
    explicit Logger(LogLevel level = LogLevel::warn, std::ostream& sink = std::cerr) : level_(level), sink_(&sink) {}

    static Logger from_env(std::ostream& sink = std::cerr) {
        const char* env = std::getenv("SUMMAKIT_LOG");
        return Logger(env ? parse_log_level(env) : LogLevel::warn, sink);
    }

    LogLevel level() const noexcept { return level_; }
    bool enabled(LogLevel l) const noexcept { return l != LogLevel::quiet && l <= level_; }

    void log(LogLevel l, std::string_view msg) const {
        if (!enabled(l)) return;
        static constexpr std::string_view names[] = {"", "error", "warn", "info", "debug"};
        *sink_ << "summakit: " << names[static_cast<int>(l)] << ": " << msg << '\n';
    }
    void error(std::string_view m) const { log(LogLevel::error, m); }
    void warn(std::string_view m) const { log(LogLevel::warn, m); }
    void info(std::string_view m) const { log(LogLevel::info, m); }
    void debug(std::string_view m) const { log(LogLevel::debug, m); }

private:
    LogLevel level_;
    std::ostream* sink_;
};

} // namespace summakit::cli
