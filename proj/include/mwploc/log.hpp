#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace mwploc::log {

enum class Level { debug, info, warning, error };

using Sink = std::function<void(Level, std::string_view)>;

/// Replaces the process-wide sink (stderr by default). Thread-safe.
void set_sink(Sink sink);
void reset_sink();

/// Every message is scrubbed of registered secrets before it reaches a sink.
void register_secret(std::string secret);
std::string scrub(std::string_view message);

void write(Level level, std::string_view message);
inline void debug(std::string_view m) { write(Level::debug, m); }
inline void info(std::string_view m) { write(Level::info, m); }
inline void warning(std::string_view m) { write(Level::warning, m); }
inline void error(std::string_view m) { write(Level::error, m); }

}  // namespace mwploc::log
