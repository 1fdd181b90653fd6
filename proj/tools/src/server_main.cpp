#include <csignal>
#include <iostream>

#include "sbss/service.hpp"

namespace {
sbss::Service* running = nullptr;
extern "C" void on_signal(int) {
  if (running) running->stop();
}
}  // namespace

int main() {
  const sbss::ServiceConfig config = sbss::ServiceConfig::from_environment();
  sbss::Service service(config);
  running = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "sbss_server listening on " << config.host << ":" << config.port
            << ", workspaces in " << config.workspace_root << "\n";
  if (!service.listen()) {
    std::cerr << "cannot bind " << config.host << ":" << config.port << "\n";
    return 1;
  }
  return 0;
}
