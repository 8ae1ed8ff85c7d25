#include "vrestore/degrade/kinds.hpp"

#include <algorithm>

#include "vrestore/error.hpp"

namespace vrestore {

namespace {
constexpr std::array<std::string_view, kKindCount> kKindNames = {
    "noise", "blur", "compression", "lowlight", "rain", "haze", "lowres", "lowfps"};
constexpr std::array<std::string_view, 4> kSeverityNames = {"none", "low", "medium", "high"};
}  // namespace

std::string_view to_string(DegradationKind k) { return kKindNames[index_of(k)]; }
std::string_view to_string(Severity s) { return kSeverityNames[static_cast<std::size_t>(s)]; }

DegradationKind parse_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (kKindNames[i] == name) return static_cast<DegradationKind>(i);
  throw InvalidArgument("unknown degradation kind '" + std::string(name) + "'");
}

Severity parse_severity(std::string_view name) {
  for (std::size_t i = 0; i < kSeverityNames.size(); ++i)
    if (kSeverityNames[i] == name) return static_cast<Severity>(i);
  throw InvalidArgument("unknown severity '" + std::string(name) + "'");
}

std::string kind_set_key(KindList kinds) {
  std::sort(kinds.begin(), kinds.end());
  std::string key;
  for (auto k : kinds) {
    if (!key.empty()) key += '+';
    key += to_string(k);
  }
  return key;
}

KindList parse_kind_set_key(std::string_view key) {
  KindList out;
  while (!key.empty()) {
    const auto pos = key.find('+');
    out.push_back(parse_kind(key.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    key.remove_prefix(pos + 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vrestore
