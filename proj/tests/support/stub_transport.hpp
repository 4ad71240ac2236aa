#pragma once

#include "wotforge/fetch/transport.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace wotforge::testing {

/// In-process transport: canned responses per exact URL, 404 otherwise.
/// Records every request.
class StubTransport final : public fetch::HttpTransport {
public:
  void set(const std::string& url, int status, std::string body = {},
           std::map<std::string, std::string> headers = {}) {
    std::lock_guard lock(mutex_);
    fetch::HttpResponse r;
    r.status = status;
    r.body = std::move(body);
    r.headers = std::move(headers);
    routes_[url] = std::move(r);
  }

  void set_handler(const std::string& url, std::function<fetch::HttpResponse(const fetch::HttpRequest&)> h) {
    std::lock_guard lock(mutex_);
    handlers_[url] = std::move(h);
  }

  void set_delay(std::chrono::milliseconds d) { delay_ = d; }

  fetch::HttpResponse get(const fetch::HttpRequest& request) override {
    {
      std::lock_guard lock(mutex_);
      requests_.push_back(request);
    }
    if (delay_.count() > 0) std::this_thread::sleep_for(delay_);
    std::lock_guard lock(mutex_);
    if (auto h = handlers_.find(request.url); h != handlers_.end()) return h->second(request);
    if (auto it = routes_.find(request.url); it != routes_.end()) return it->second;
    fetch::HttpResponse missing;
    missing.status = 404;
    missing.body = "not found";
    return missing;
  }

  std::size_t calls() const {
    std::lock_guard lock(mutex_);
    return requests_.size();
  }
  std::vector<fetch::HttpRequest> requests() const {
    std::lock_guard lock(mutex_);
    return requests_;
  }
  void reset_log() {
    std::lock_guard lock(mutex_);
    requests_.clear();
  }

private:
  mutable std::mutex mutex_;
  std::map<std::string, fetch::HttpResponse> routes_;
  std::map<std::string, std::function<fetch::HttpResponse(const fetch::HttpRequest&)>> handlers_;
  std::vector<fetch::HttpRequest> requests_;
  std::chrono::milliseconds delay_{0};
};

} // namespace wotforge::testing
