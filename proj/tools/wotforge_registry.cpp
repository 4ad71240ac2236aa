#include "wotforge/api/server.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <thread>

int main(int argc, char** argv) {
  using namespace wotforge;
  CLI::App app{"WoTify registry server", "wotforge-registry"};
  std::string config_file, addr, data_dir;
  bool quiet = false;
  app.add_option("--config,-c", config_file, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--addr", addr, "Listen address host:port (overrides WOTIFY_ADDR)");
  app.add_option("--data-dir", data_dir, "Store directory (overrides WOTIFY_DATA_DIR)");
  app.add_flag("--quiet,-q", quiet, "No access log");
  app.footer("Environment: WOTIFY_ADDR, WOTIFY_DATA_DIR, WOTIFY_UI_ORIGIN, WOTIFY_FETCH_TIMEOUT_MS");
  CLI11_PARSE(app, argc, argv);

  // Block termination signals in every thread; a dedicated thread waits for them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    auto config = api::load_config(config_file.empty() ? std::nullopt
                                                       : std::optional<std::filesystem::path>(config_file));
    if (!addr.empty()) std::tie(config.host, config.port) = api::parse_addr(addr);
    if (!data_dir.empty()) config.data_dir = data_dir;
    config.access_log = !quiet;

    store::StoreOptions store_options;
    store_options.data_dir = config.data_dir;
    store_options.compact_threshold = config.compact_threshold;
    auto store = std::make_shared<store::RegistryStore>(store_options);

    fetch::FetcherOptions fetch_options;
    fetch_options.timeout = config.fetch_timeout;
    if (config.forges_file) {
      std::ifstream in(*config.forges_file);
      fetch_options.forges = fetch::ForgeTable::from_json(Json::parse(in));
    }
    auto fetcher =
        std::make_shared<fetch::ReadmeFetcher>(std::make_shared<fetch::HttplibTransport>(), fetch_options);

    api::RegistryServer server(config, store, fetcher);
    int port = server.bind();
    std::cerr << "wotforge-registry: " << store->project_count() << " projects in " << config.data_dir.string()
              << "; listening on http://" << config.host << ':' << port << std::endl;

    std::thread waiter([&] {
      int sig = 0;
      sigwait(&signals, &sig);
      std::cerr << "wotforge-registry: shutting down\n";
      server.stop();
    });
    server.listen();
    // listen() also returns when the server fails; wake the waiter either way.
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
  } catch (const std::exception& e) {
    std::cerr << "wotforge-registry: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
