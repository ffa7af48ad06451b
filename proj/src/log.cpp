#include "ewave/log.hpp"

#include <iostream>
#include <mutex>

namespace ewave {
namespace {

std::mutex g_log_mutex;
LogLevel g_level = LogLevel::warning;
LogSink g_sink;

const char* level_name(LogLevel level) {
  switch (level) {
    case LogLevel::debug: return "debug";
    case LogLevel::info: return "info";
    case LogLevel::warning: return "warning";
  }
  return "";
}

}  // namespace

void set_log_sink(LogSink sink) {
  std::lock_guard<std::mutex> lock(g_log_mutex);
  g_sink = std::move(sink);
}

void set_log_level(LogLevel level) {
  std::lock_guard<std::mutex> lock(g_log_mutex);
  g_level = level;
}

void log(LogLevel level, const std::string& message) {
  std::lock_guard<std::mutex> lock(g_log_mutex);
  if (level < g_level) return;
  if (g_sink) {
    g_sink(level, message);
    return;
  }
  std::cerr << "[ewave " << level_name(level) << "] " << message << '\n';
}

}  // namespace ewave
