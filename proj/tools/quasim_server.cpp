#include <httplib.h>

#include <cstdlib>
#include <iostream>
#include <string>

#include "quasim/service/service.hpp"

namespace {

long env_number(const char* name, long fallback, long lo, long hi) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < lo || v > hi) {
    std::cerr << "error: " << name << " must be an integer in [" << lo << ", " << hi << "]\n";
    std::exit(2);
  }
  return v;
}

}  // namespace

int main() {
  const int port = static_cast<int>(env_number("QUASIM_PORT", 8080, 1, 65535));
  const auto workers = static_cast<std::size_t>(env_number("QUASIM_WORKERS", 1, 1, 64));

  quasim::service::JobService jobs(workers);
  httplib::Server server;
  quasim::service::install_routes(server, jobs);
  std::cerr << "quasim-server listening on port " << port << " with " << workers << " worker(s)\n";
  if (!server.listen("0.0.0.0", port)) {
    std::cerr << "error: cannot listen on port " << port << "\n";
    return 3;
  }
  return 0;
}
