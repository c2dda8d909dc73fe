#pragma once

#include <string>

#include "siamix/error.hpp"

namespace siamix {

enum class Task { detection, change };

inline const char* task_name(Task t) { return t == Task::detection ? "detection" : "change"; }

inline Task parse_task(const std::string& s) {
  if (s == "detection") return Task::detection;
  if (s == "change") return Task::change;
  throw ConfigError("unknown task '" + s + "' (expected detection|change)");
}

}  // namespace siamix
