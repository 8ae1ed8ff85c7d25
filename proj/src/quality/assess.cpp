#include "vrestore/quality/assess.hpp"

#include <algorithm>
#include <cstdio>

#include "vrestore/error.hpp"
#include "vrestore/media/clip_io.hpp"
#include "vrestore/net/http.hpp"
#include "vrestore/quality/metrics.hpp"

namespace vrestore {

double assess_nr(const Clip& clip, const NominalFormat& nominal, const ThresholdTable& table,
                 const NrWeights& weights) {
  const DetectorReport rep = run_detectors(clip, nominal);
  double penalty = 0.0;
  for (auto k : kAllKinds) penalty += weights[index_of(k)] * table.continuous(k, rep.scores[index_of(k)]);
  return std::clamp(100.0 - penalty, 0.0, 100.0);
}

QualityReport assess(const Clip& clip, const Clip* reference, const NominalFormat& nominal,
                     const ThresholdTable& table, const NrWeights& weights) {
  QualityReport r;
  r.nr_score = assess_nr(clip, nominal, table, weights);
  if (reference) {
    const Clip aligned = align_to_reference(clip, *reference);
    r.psnr_db = psnr(aligned, *reference);
    r.psnr_per_frame = psnr_per_frame(aligned, *reference);
    r.ssim_per_frame = ssim_per_frame(aligned, *reference);
    double s = 0.0;
    for (double v : r.ssim_per_frame) s += v;
    r.ssim = s / double(r.ssim_per_frame.size());
  }
  return r;
}

std::string_view to_string(AssessorKind k) {
  switch (k) {
    case AssessorKind::NoReference: return "nr";
    case AssessorKind::Psnr: return "psnr";
    case AssessorKind::External: return "external";
  }
  return "?";
}

AssessorKind parse_assessor_kind(std::string_view name) {
  if (name == "nr") return AssessorKind::NoReference;
  if (name == "psnr") return AssessorKind::Psnr;
  if (name == "external") return AssessorKind::External;
  throw InvalidArgument("unknown assessor '" + std::string(name) + "'");
}

double NrAssessor::score(const Clip& clip, const AssessContext& ctx) {
  return assess_nr(clip, ctx.nominal, table_, weights_);
}

double PsnrAssessor::score(const Clip& clip, const AssessContext& ctx) {
  if (!ctx.reference) throw ConfigurationError("psnr assessor needs a reference clip");
  return psnr(align_to_reference(clip, *ctx.reference), *ctx.reference);
}

ExternalAssessor::ExternalAssessor(std::string base_url, std::filesystem::path scratch_dir,
                                   std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), scratch_(std::move(scratch_dir)), timeout_(timeout) {}

double ExternalAssessor::score(const Clip& clip, const AssessContext& ctx) {
  const auto dir = scratch_ / ("assess_" + std::to_string(calls_++));
  try {
    save_clip(clip, dir);
  } catch (const IoError& e) {
    throw ServiceUnavailable(std::string("cannot stage clip for external assessor: ") + e.what());
  }
  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t i : sample_indices(clip.size(), kDetectorFrames)) {
    char name[32];
    std::snprintf(name, sizeof name, "%06zu.ppm", i);
    frames.push_back((dir / name).string());
  }
  nlohmann::json body{{"manifest", (dir / "manifest.json").string()}, {"frames", frames}, {"subtask", nullptr}};
  if (ctx.subtask) body["subtask"] = std::string(to_string(*ctx.subtask));
  const auto reply = post_json(base_url_, "/assess", body, timeout_);
  if (!reply.contains("score") || !reply.at("score").is_number())
    throw ServiceUnavailable("malformed assessor reply");
  return reply.at("score").get<double>();
}

}  // namespace vrestore
