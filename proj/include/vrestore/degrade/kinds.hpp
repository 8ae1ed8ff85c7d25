#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vrestore {

// Canonical index order 0..7.
enum class DegradationKind : std::uint8_t { Noise, Blur, Compression, LowLight, Rain, Haze, LowRes, LowFps };

enum class Severity : std::uint8_t { None, Low, Medium, High };

inline constexpr std::size_t kKindCount = 8;

inline constexpr std::array<DegradationKind, kKindCount> kAllKinds = {
    DegradationKind::Noise, DegradationKind::Blur,  DegradationKind::Compression, DegradationKind::LowLight,
    DegradationKind::Rain,  DegradationKind::Haze,  DegradationKind::LowRes,      DegradationKind::LowFps};

constexpr std::size_t index_of(DegradationKind k) { return static_cast<std::size_t>(k); }
constexpr int level(Severity s) { return static_cast<int>(s); }

std::string_view to_string(DegradationKind k);
std::string_view to_string(Severity s);
// Lowercase canonical names; throws InvalidArgument on unknown names.
DegradationKind parse_kind(std::string_view name);
Severity parse_severity(std::string_view name);

using KindList = std::vector<DegradationKind>;

// Sorted by canonical index, joined with '+', e.g. "noise+compression".
std::string kind_set_key(KindList kinds);
KindList parse_kind_set_key(std::string_view key);

}  // namespace vrestore
