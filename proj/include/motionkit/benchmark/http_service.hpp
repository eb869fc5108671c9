#pragma once

#include <map>
#include <string>

#include <httplib.h>

#include "motionkit/benchmark/clients.hpp"

namespace motionkit::bench {

// POSTs JSON to a per-service URL such as http://host:port/embed.
class HttpService : public JsonService {
 public:
  explicit HttpService(std::map<std::string, std::string> urls, int timeout_s = 60)
      : urls_(std::move(urls)), timeout_s_(timeout_s) {}

  json call(const std::string& service, const json& request) const override {
    const auto it = urls_.find(service);
    if (it == urls_.end()) throw ClientError("no endpoint configured for " + service);
    const auto [origin, path] = split_url(it->second);
    httplib::Client client(origin);
    client.set_connection_timeout(timeout_s_);
    client.set_read_timeout(timeout_s_);
    const auto res = client.Post(path, request.dump(), "application/json");
    if (!res) throw ClientError(service + ": request failed (" + httplib::to_string(res.error()) + ")");
    if (res->status != 200) throw ClientError(service + ": HTTP " + std::to_string(res->status));
    try {
      return json::parse(res->body);
    } catch (const json::exception& e) {
      throw ClientError(service + ": response is not JSON: " + e.what());
    }
  }

  static std::pair<std::string, std::string> split_url(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos) throw InvalidArgument("endpoint URL needs a scheme: " + url);
    const auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
  }

 private:
  std::map<std::string, std::string> urls_;
  int timeout_s_;
};

}  // namespace motionkit::bench
