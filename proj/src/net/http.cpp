#include "vrestore/net/http.hpp"

#include <cstdlib>

#include <httplib.h>

#include "vrestore/error.hpp"

namespace vrestore {

std::string adapter_base_url() {
  const char* v = std::getenv(kAdapterUrlEnv);
  return v ? std::string(v) : std::string();
}

nlohmann::json post_json(const std::string& base_url, const std::string& path, const nlohmann::json& body,
                         std::chrono::milliseconds timeout) {
  if (base_url.empty()) throw ServiceUnavailable("no adapter URL configured (set " + std::string(kAdapterUrlEnv) + ")");
  httplib::Client client(base_url);
  if (!client.is_valid()) throw ServiceUnavailable("invalid adapter URL " + base_url);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) throw ServiceUnavailable(base_url + path + ": " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw ServiceUnavailable(base_url + path + ": HTTP " + std::to_string(res->status));
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception&) {
    throw ServiceUnavailable(base_url + path + ": reply is not JSON");
  }
}

}  // namespace vrestore
