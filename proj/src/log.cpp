#include "segsim/log.hpp"

#include <cstdlib>
#include <string>

namespace segsim::log {

Level threshold() noexcept {
  static const Level level = [] {
    const char* env = std::getenv("SEGSIM_LOG");
    if (env == nullptr) return Level::Warn;
    const std::string_view v(env);
    if (v == "error") return Level::Error;
    if (v == "info") return Level::Info;
    if (v == "debug") return Level::Debug;
    return Level::Warn;
  }();
  return level;
}

}  // namespace segsim::log
