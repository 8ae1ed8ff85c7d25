#include "vrestore/identify/profile.hpp"

#include <algorithm>
#include <numeric>

#include "vrestore/error.hpp"
#include "vrestore/media/clip_io.hpp"
#include "vrestore/parallel.hpp"

namespace vrestore {

KindList DegradationProfile::active_kinds() const {
  KindList out;
  for (auto k : kAllKinds)
    if (active(k)) out.push_back(k);
  return out;
}

nlohmann::json DegradationProfile::to_json() const {
  nlohmann::json sev = nlohmann::json::object(), sc = nlohmann::json::object();
  for (auto k : kAllKinds) {
    const std::string name(to_string(k));
    sev[name] = std::string(to_string(of(k)));
    sc[name] = scores[index_of(k)];
  }
  nlohmann::json j{{"severity", sev}, {"scores", sc}};
  nlohmann::json lc = nlohmann::json::array();
  for (auto k : kAllKinds)
    if (low_confidence[index_of(k)]) lc.push_back(std::string(to_string(k)));
  if (!lc.empty()) j["low_confidence"] = lc;
  return j;
}

DegradationProfile DegradationProfile::from_json(const nlohmann::json& j) {
  DegradationProfile p;
  try {
    for (const auto& [name, level_name] : j.at("severity").items())
      p.severity[index_of(parse_kind(name))] = parse_severity(level_name.get<std::string>());
    if (j.contains("scores"))
      for (const auto& [name, v] : j.at("scores").items()) p.scores[index_of(parse_kind(name))] = v.get<double>();
    if (j.contains("low_confidence"))
      for (const auto& name : j.at("low_confidence"))
        p.low_confidence[index_of(parse_kind(name.get<std::string>()))] = true;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidFormat(std::string("bad profile: ") + e.what());
  }
  return p;
}

namespace {

// Produced by `vrestore calibrate` on a seeded desk set (3 scenes, every
// kind x severity x variant).
constexpr std::array<ThresholdTable::Cuts, kKindCount> kDefaultCuts = {{
    {0.0162, 0.0379, 0.0749},  // noise
    {2.52, 4.96, 7.55},        // blur
    {0.447, 1.59, 3.21},       // compression
    {0.539, 0.709, 0.811},     // lowlight
    {0.651, 2.95, 4.70},       // rain
    {0.265, 0.435, 0.555},     // haze
    {1.5, 2.5, 3.5},           // lowres
    {1.5, 3.0, 6.0},           // lowfps
}};

}  // namespace

ThresholdTable::ThresholdTable() : cuts_(kDefaultCuts) {}

ThresholdTable::ThresholdTable(std::array<Cuts, kKindCount> cuts) : cuts_(cuts) {
  for (const auto& c : cuts_)
    if (!(c[0] <= c[1] && c[1] <= c[2])) throw InvalidArgument("threshold cut points must be ascending");
}

Severity ThresholdTable::classify(DegradationKind k, double score) const {
  const auto& c = cuts(k);
  int n = 0;
  for (double t : c) n += score >= t ? 1 : 0;
  return static_cast<Severity>(n);
}

double ThresholdTable::continuous(DegradationKind k, double score) const {
  const auto& c = cuts(k);
  // Below the first cut, ramp from 0 at one "step" (c1 - c0) beneath it.
  const double step0 = std::max(c[1] - c[0], 1e-9);
  if (score < c[0]) return std::max(0.0, 1.0 - (c[0] - score) / step0);
  for (int i = 0; i < 2; ++i)
    if (score < c[i + 1]) return 1.0 + i + (score - c[i]) / std::max(c[i + 1] - c[i], 1e-9);
  const double step2 = std::max(c[2] - c[1], 1e-9);
  return std::min(4.0, 3.0 + (score - c[2]) / step2);
}

nlohmann::json ThresholdTable::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (auto k : kAllKinds) {
    const auto& c = cuts(k);
    j[std::string(to_string(k))] = {c[0], c[1], c[2]};
  }
  return j;
}

ThresholdTable ThresholdTable::from_json(const nlohmann::json& j) {
  std::array<Cuts, kKindCount> cuts = kDefaultCuts;
  try {
    for (const auto& [name, v] : j.items()) {
      if (!v.is_array() || v.size() != 3) throw InvalidFormat("threshold entry for " + name + " needs 3 values");
      cuts[index_of(parse_kind(name))] = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidFormat(std::string("bad threshold table: ") + e.what());
  }
  return ThresholdTable(cuts);
}

namespace {

CalibrationSample sample_for(const Clip& clip, const GroundTruthLabel& label, const NominalFormat& nominal) {
  CalibrationSample s;
  s.scores = run_detectors(clip, nominal).scores;
  for (const auto& spec : label.specs) s.truth[index_of(spec.kind)] = spec.severity;
  return s;
}

NominalFormat nominal_of(const Clip& gt) {
  NominalFormat n;
  n.width = gt.width();
  n.height = gt.height();
  n.fps = gt.fps();
  n.frames = gt.size();
  return n;
}

// Best split of sorted labels into 4 ordered classes; returns the three
// boundary positions (item index where the class starts).
std::array<std::size_t, 3> best_splits(const std::vector<double>& s, const std::vector<int>& cls) {
  const std::size_t n = s.size();
  auto boundary_ok = [&](std::size_t i) { return i == 0 || i == n || s[i - 1] < s[i]; };
  // f[k][i]: most correct among the first i items using classes 0..k, with
  // class k's run ending at i. Stored with argmax for backtracking.
  std::vector<std::array<int, 4>> f(n + 1);
  std::vector<std::array<std::size_t, 4>> from(n + 1);
  for (int k = 0; k < 4; ++k) {
    for (std::size_t i = 0; i <= n; ++i) {
      int best = -1;
      std::size_t arg = 0;
      if (k == 0) {
        best = 0;
        for (std::size_t j = 0; j < i; ++j) best += cls[j] == 0 ? 1 : 0;
      } else {
        // Class k covers [j, i); j must be a legal boundary.
        int run = 0;
        for (std::size_t jj = i + 1; jj-- > 0;) {
          if (jj < i) run += cls[jj] == k ? 1 : 0;
          if (!boundary_ok(jj)) continue;
          const int cand = f[jj][k - 1] + run;
          if (cand >= best) {  // >= prefers the lowest start: widest upper class
            best = cand;
            arg = jj;
          }
        }
      }
      f[i][k] = best;
      from[i][k] = arg;
    }
  }
  std::array<std::size_t, 3> splits{};
  std::size_t i = n;
  for (int k = 3; k >= 1; --k) {
    splits[k - 1] = from[i][k];
    i = from[i][k];
  }
  return splits;
}

double cut_at(const std::vector<double>& s, std::size_t i) {
  if (s.empty()) return 0.0;
  if (i == 0) return s.front();
  if (i >= s.size()) return s.back() + std::max(1e-9, std::abs(s.back()) * 1e-6);
  return 0.5 * (s[i - 1] + s[i]);
}

}  // namespace

std::vector<CalibrationSample> collect_calibration_samples(const DatasetManifest& manifest) {
  std::vector<CalibrationSample> out(manifest.degraded.size());
  parallel_for(manifest.degraded.size(), [&](std::size_t i) {
    const auto& entry = manifest.degraded[i];
    const GroundTruthLabel* label = manifest.find_label(entry.id);
    if (!label) throw DataError("no label for clip " + entry.id);
    const GtEntry* gt = manifest.find_gt(label->gt_clip_id);
    if (!gt) throw DataError("no ground-truth entry for " + label->gt_clip_id);
    NominalFormat nominal;
    nominal.width = gt->width;
    nominal.height = gt->height;
    nominal.fps = gt->fps;
    nominal.frames = gt->frames;
    out[i] = sample_for(load_clip(manifest.root / entry.path), *label, nominal);
  });
  return out;
}

std::vector<CalibrationSample> collect_calibration_samples(const std::vector<GeneratedClip>& clips,
                                                           const std::vector<Clip>& gt_clips) {
  std::vector<CalibrationSample> out(clips.size());
  parallel_for(clips.size(), [&](std::size_t i) {
    const auto& g = clips[i];
    const Clip* gt = nullptr;
    for (const auto& c : gt_clips)
      if (c.id() == g.label.gt_clip_id) gt = &c;
    if (!gt) throw DataError("no ground-truth clip " + g.label.gt_clip_id);
    out[i] = sample_for(g.clip, g.label, nominal_of(*gt));
  });
  return out;
}

ThresholdTable calibrate_thresholds(const std::vector<CalibrationSample>& samples) {
  std::vector<std::string> gaps;
  for (auto k : kAllKinds)
    for (int lv = 1; lv <= 3; ++lv) {
      const bool seen = std::any_of(samples.begin(), samples.end(),
                                    [&](const CalibrationSample& s) { return level(s.truth[index_of(k)]) == lv; });
      if (!seen) gaps.push_back(std::string(to_string(k)) + ":" + std::string(to_string(Severity(lv))));
    }
  if (!gaps.empty()) {
    std::string msg = "calibration set lacks";
    for (const auto& g : gaps) msg += " " + g;
    throw CalibrationCoverageError(msg);
  }

  std::array<ThresholdTable::Cuts, kKindCount> cuts{};
  for (auto k : kAllKinds) {
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t ki = index_of(k);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (samples[a].scores[ki] != samples[b].scores[ki]) return samples[a].scores[ki] < samples[b].scores[ki];
      return level(samples[a].truth[ki]) < level(samples[b].truth[ki]);
    });
    std::vector<double> s;
    std::vector<int> cls;
    for (std::size_t i : order) {
      s.push_back(samples[i].scores[ki]);
      cls.push_back(level(samples[i].truth[ki]));
    }
    const auto splits = best_splits(s, cls);
    for (int c = 0; c < 3; ++c) cuts[ki][c] = cut_at(s, splits[c]);
  }
  return ThresholdTable(cuts);
}

ThresholdTable calibrate_thresholds(const DatasetManifest& manifest) {
  return calibrate_thresholds(collect_calibration_samples(manifest));
}

double severity_accuracy(const ThresholdTable& table, const std::vector<CalibrationSample>& samples,
                         DegradationKind k) {
  if (samples.empty()) return 0.0;
  std::size_t ok = 0;
  for (const auto& s : samples) ok += table.classify(k, s.scores[index_of(k)]) == s.truth[index_of(k)] ? 1 : 0;
  return double(ok) / double(samples.size());
}

}  // namespace vrestore
