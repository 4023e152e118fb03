#include "convcool/errors.hpp"

#include <cstdio>
#include <mutex>

namespace convcool {

namespace {
std::mutex handler_mutex;
std::function<void(const std::string&)> handler;
}  // namespace

void set_warning_handler(std::function<void(const std::string&)> h) {
  std::lock_guard<std::mutex> lock(handler_mutex);
  handler = std::move(h);
}

void warn(const std::string& message) {
  std::function<void(const std::string&)> h;
  {
    std::lock_guard<std::mutex> lock(handler_mutex);
    h = handler;
  }
  if (h)
    h(message);
  else
    std::fprintf(stderr, "warning: %s\n", message.c_str());
}

}  // namespace convcool
