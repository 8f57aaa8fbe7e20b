#pragma once

#include <iostream>
#include <string_view>

namespace segsim::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Threshold read once from SEGSIM_LOG (error | warn | info | debug); default warn.
Level threshold() noexcept;

inline bool enabled(Level level) noexcept { return level <= threshold(); }

template <class... Args>
void write(Level level, std::string_view tag, const Args&... args) {
  if (!enabled(level)) return;
  std::clog << "[segsim " << tag << "] ";
  (std::clog << ... << args);
  std::clog << '\n';
}

template <class... Args>
void info(const Args&... args) { write(Level::Info, "info", args...); }
template <class... Args>
void debug(const Args&... args) { write(Level::Debug, "debug", args...); }
template <class... Args>
void warn(const Args&... args) { write(Level::Warn, "warn", args...); }

}  // namespace segsim::log
