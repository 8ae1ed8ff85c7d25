#include "vrestore/identify/identifier.hpp"

#include <cstdio>

#include "vrestore/error.hpp"
#include "vrestore/media/clip_io.hpp"
#include "vrestore/net/http.hpp"
#include "vrestore/quality/metrics.hpp"

namespace vrestore {

std::string_view to_string(IdentifierKind k) {
  switch (k) {
    case IdentifierKind::Oracle: return "oracle";
    case IdentifierKind::Heuristic: return "heuristic";
    case IdentifierKind::External: return "external";
  }
  return "?";
}

IdentifierKind parse_identifier_kind(std::string_view name) {
  if (name == "oracle") return IdentifierKind::Oracle;
  if (name == "heuristic") return IdentifierKind::Heuristic;
  if (name == "external") return IdentifierKind::External;
  throw InvalidArgument("unknown identifier '" + std::string(name) + "'");
}

bool Identifier::check_removed(const Clip& clip, DegradationKind k, const IdentifyContext& ctx) {
  return level(identify(clip, ctx).of(k)) <= level(success_threshold_);
}

OracleIdentifier::OracleIdentifier(GroundTruthLabel label, bool verify_with_reference)
    : Identifier(Severity::None), label_(std::move(label)), verify_(verify_with_reference) {}

DegradationProfile OracleIdentifier::identify(const Clip& clip, const IdentifyContext&) {
  if (clip.empty()) throw InvalidArgument("cannot identify an empty clip");
  DegradationProfile p;
  for (const auto& spec : label_.specs) {
    const std::size_t i = index_of(spec.kind);
    if (removed_[i]) continue;
    p.severity[i] = spec.severity;
    p.scores[i] = level(spec.severity);
  }
  return p;
}

void OracleIdentifier::observe_step(DegradationKind k, const Clip& before, const Clip& after,
                                    const IdentifyContext& ctx) {
  if (verify_ && ctx.reference) {
    // Target: the reference carrying only the degradations still outstanding
    // once k is gone (same parameters and seeds as the label).
    std::vector<DegradationSpec> rest;
    for (const auto& spec : label_.specs)
      if (spec.kind != k && !removed_[index_of(spec.kind)]) rest.push_back(spec);
    const Clip target = rest.empty() ? *ctx.reference : compose_mixed(*ctx.reference, rest, "target").first;
    const double was = psnr(align_to_reference(before, target), target);
    const double now = psnr(align_to_reference(after, target), target);
    if (now < was) return;
  }
  mark_removed(k);
}

HeuristicIdentifier::HeuristicIdentifier(ThresholdTable table) : Identifier(Severity::Low), table_(table) {}

DegradationProfile HeuristicIdentifier::identify(const Clip& clip, const IdentifyContext& ctx) {
  const DetectorReport rep = run_detectors(clip, ctx.nominal);
  DegradationProfile p;
  p.scores = rep.scores;
  p.low_confidence = rep.low_confidence;
  for (auto k : kAllKinds) p.severity[index_of(k)] = table_.classify(k, rep.scores[index_of(k)]);
  return p;
}

ExternalIdentifier::ExternalIdentifier(std::string base_url, std::filesystem::path scratch_dir,
                                       std::chrono::milliseconds timeout)
    : Identifier(Severity::Low), base_url_(std::move(base_url)), scratch_(std::move(scratch_dir)), timeout_(timeout) {}

DegradationProfile ExternalIdentifier::identify(const Clip& clip, const IdentifyContext&) {
  if (clip.empty()) throw InvalidArgument("cannot identify an empty clip");
  const auto dir = scratch_ / ("identify_" + std::to_string(calls_++));
  try {
    save_clip(clip, dir);
  } catch (const IoError& e) {
    throw ServiceUnavailable(std::string("cannot stage clip for external identifier: ") + e.what());
  }
  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t i : sample_indices(clip.size(), kDetectorFrames)) {
    char name[32];
    std::snprintf(name, sizeof name, "%06zu.ppm", i);
    frames.push_back((dir / name).string());
  }
  const auto reply =
      post_json(base_url_, "/identify", {{"manifest", (dir / "manifest.json").string()}, {"frames", frames}}, timeout_);
  try {
    DegradationProfile p;
    for (const auto& [name, lv] : reply.at("severity").items())
      p.severity[index_of(parse_kind(name))] = parse_severity(lv.get<std::string>());
    for (auto k : kAllKinds) p.scores[index_of(k)] = level(p.of(k));
    return p;
  } catch (const std::exception& e) {
    throw ServiceUnavailable(std::string("malformed identifier reply: ") + e.what());
  }
}

}  // namespace vrestore
