#pragma once

#include <functional>
#include <string_view>

namespace mediadisc::log {

enum class Level { Info, Warn };

using Sink = std::function<void(Level, std::string_view)>;

// Replaces the process-wide sink and returns the previous one. The default
// sink writes warnings to stderr and drops info messages.
Sink set_sink(Sink sink);

void info(std::string_view message);
void warn(std::string_view message);

}  // namespace mediadisc::log
