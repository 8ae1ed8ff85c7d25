#pragma once

#include <chrono>
#include <string>

#include <json.hpp>

namespace vrestore {

// Environment variable holding the base URL of external adapters,
// e.g. "http://127.0.0.1:8099".
inline constexpr const char* kAdapterUrlEnv = "VRESTORE_ADAPTER_URL";

// Value of kAdapterUrlEnv, or empty when unset.
std::string adapter_base_url();

// POSTs a JSON body to base_url + path and parses the JSON reply. Transport
// failures, timeouts, non-2xx statuses and unparsable bodies all raise
// ServiceUnavailable.
nlohmann::json post_json(const std::string& base_url, const std::string& path, const nlohmann::json& body,
                         std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));

}  // namespace vrestore
