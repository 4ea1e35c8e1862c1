#include "mwploc/log.hpp"

#include <iostream>
#include <mutex>
#include <vector>

namespace mwploc::log {

namespace {

struct State {
  std::mutex mu;
  Sink sink;
  std::vector<std::string> secrets;
};

State& state() {
  static State s;
  return s;
}

std::string_view level_name(Level level) {
  switch (level) {
    case Level::debug: return "debug";
    case Level::info: return "info";
    case Level::warning: return "warning";
    case Level::error: return "error";
  }
  return "info";
}

std::string scrub_locked(std::string_view message, const std::vector<std::string>& secrets) {
  std::string out(message);
  for (const auto& secret : secrets) {
    if (secret.empty()) continue;
    for (auto pos = out.find(secret); pos != std::string::npos; pos = out.find(secret, pos + 3))
      out.replace(pos, secret.size(), "***");
  }
  return out;
}

}  // namespace

void set_sink(Sink sink) {
  std::lock_guard lock(state().mu);
  state().sink = std::move(sink);
}

void reset_sink() { set_sink(nullptr); }

void register_secret(std::string secret) {
  if (secret.empty()) return;
  std::lock_guard lock(state().mu);
  state().secrets.push_back(std::move(secret));
}

std::string scrub(std::string_view message) {
  std::lock_guard lock(state().mu);
  return scrub_locked(message, state().secrets);
}

void write(Level level, std::string_view message) {
  auto& s = state();
  std::lock_guard lock(s.mu);
  const std::string clean = scrub_locked(message, s.secrets);
  if (s.sink) {
    s.sink(level, clean);
    return;
  }
  if (level == Level::debug) return;
  std::cerr << "[" << level_name(level) << "] " << clean << '\n';
}

}  // namespace mwploc::log
