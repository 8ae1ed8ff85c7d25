#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "vrestore/degrade/degrade.hpp"
#include "vrestore/error.hpp"
#include "vrestore/identify/detectors.hpp"
#include "vrestore/identify/identifier.hpp"
#include "vrestore/identify/profile.hpp"

using namespace vrestore;
using K = DegradationKind;

namespace {

NominalFormat nominal_of(const Clip& c) {
  NominalFormat n;
  n.width = c.width();
  n.height = c.height();
  n.fps = c.fps();
  n.frames = c.size();
  return n;
}

// Best achievable 4-class accuracy for one kind by trying every cut triple
// drawn from the observed scores (plus one above them all).
double brute_force_accuracy(const std::vector<CalibrationSample>& samples, K k) {
  std::vector<double> cand;
  for (const auto& s : samples) cand.push_back(s.scores[index_of(k)]);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  cand.push_back(cand.back() + 1.0);
  std::size_t best = 0;
  for (std::size_t a = 0; a < cand.size(); ++a)
    for (std::size_t b = a; b < cand.size(); ++b)
      for (std::size_t c = b; c < cand.size(); ++c) {
        std::size_t ok = 0;
        for (const auto& s : samples) {
          const double v = s.scores[index_of(k)];
          const int cls = (v >= cand[a]) + (v >= cand[b]) + (v >= cand[c]);
          ok += cls == level(s.truth[index_of(k)]);
        }
        best = std::max(best, ok);
      }
  return double(best) / samples.size();
}

std::vector<CalibrationSample> random_samples(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::vector<CalibrationSample> out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < kKindCount; ++k) {
      const int truth = i < 4 ? int(i) : int(rng() % 4);
      out[i].truth[k] = Severity(truth);
      // Noisy but correlated scores, coarse enough to produce ties.
      out[i].scores[k] = std::round(truth * 2.0 + std::normal_distribution<double>(0, 1.5)(rng));
    }
  return out;
}

}  // namespace

TEST(Oracle, ReportsLabelUntilMarkedRemoved) {
  const GroundTruthLabel label{"d", {make_spec(K::Noise, Severity::Medium), make_spec(K::Haze, Severity::High)}, "g"};
  OracleIdentifier id(label);
  const Clip c = test::scene(16, 16, 2);
  auto p = id.identify(c, {});
  EXPECT_EQ(p.active_kinds(), (KindList{K::Noise, K::Haze}));
  EXPECT_EQ(p.of(K::Haze), Severity::High);
  EXPECT_FALSE(id.check_removed(c, K::Noise, {}));
  EXPECT_TRUE(id.check_removed(c, K::Blur, {}));

  id.observe_step(K::Noise, c, c, {});
  EXPECT_EQ(id.identify(c, {}).active_kinds(), (KindList{K::Haze}));
  id.undo_step(K::Noise);
  EXPECT_EQ(id.identify(c, {}).active_kinds(), (KindList{K::Noise, K::Haze}));
  id.mark_removed(K::Haze);
  id.reset();
  EXPECT_EQ(id.identify(c, {}).active_kinds(), (KindList{K::Noise, K::Haze}));
  EXPECT_THROW(id.identify(Clip(), {}), InvalidArgument);
}

TEST(Oracle, VerifyRejectsStepsThatMoveAwayFromTarget) {
  const Clip gt = test::scene(48, 32, 3);
  const auto spec = make_spec(K::Noise, Severity::Medium, 5);
  const auto [noisy, label] = compose_mixed(gt, {spec}, "d");
  OracleIdentifier id(label, true);
  IdentifyContext ctx;
  ctx.reference = &gt;
  // Making things worse does not count.
  const Clip worse = apply_degradation(noisy, make_spec(K::Noise, Severity::High, 9));
  id.observe_step(K::Noise, noisy, worse, ctx);
  EXPECT_FALSE(id.removed(K::Noise));
  // Reaching the pristine reference does.
  id.observe_step(K::Noise, noisy, gt, ctx);
  EXPECT_TRUE(id.removed(K::Noise));
}

TEST(Oracle, VerifyTargetsTheOutstandingDegradations) {
  const Clip gt = test::scene(48, 32, 3);
  const auto haze = make_spec(K::Haze, Severity::Medium, 1);
  const auto noise = make_spec(K::Noise, Severity::Medium, 2);
  const auto [clip, label] = compose_mixed(gt, {haze, noise}, "d");
  OracleIdentifier id(label, true);
  IdentifyContext ctx;
  ctx.reference = &gt;
  // Removing noise exactly leaves the hazy clip, which is the target.
  const Clip hazy = apply_degradation(gt, haze);
  id.observe_step(K::Noise, clip, hazy, ctx);
  EXPECT_TRUE(id.removed(K::Noise));
}

TEST(Heuristic, PristineDeskSceneIsClean) {
  HeuristicIdentifier id;
  for (std::uint64_t seed : {1, 2, 3}) {
    const Clip gt = test::desk_scene(8, seed);
    IdentifyContext ctx{nominal_of(gt), nullptr};
    EXPECT_TRUE(id.identify(gt, ctx).active_kinds().empty()) << "seed " << seed;
  }
}

TEST(Heuristic, SeverityIsMonotoneInTheDegradationLevel) {
  HeuristicIdentifier id;
  const Clip gt = test::desk_scene(8, 2);
  IdentifyContext ctx{nominal_of(gt), nullptr};
  for (K k : {K::Noise, K::Blur, K::Compression, K::LowLight, K::Haze, K::Rain}) {
    int prev = 0;
    for (Severity s : {Severity::Low, Severity::Medium, Severity::High}) {
      const int got = level(id.identify(apply_degradation(gt, make_spec(k, s, 3)), ctx).of(k));
      EXPECT_GE(got, prev) << to_string(k) << " " << to_string(s);
      EXPECT_GE(got, 1) << to_string(k) << " " << to_string(s);
      prev = got;
    }
  }
}

TEST(Heuristic, DetectorsAreZeroOnConstantFrames) {
  const Frame f = test::constant_frame(64, 64, 0.5f);
  EXPECT_NEAR(noise_score(f), 0.0, 1e-9);
  EXPECT_NEAR(blockiness_score(f.luma()), 0.0, 1e-9);
  EXPECT_NEAR(darkness_score(f), 0.5, 1e-6);
}

TEST(Thresholds, ClassifyCountsCuts) {
  ThresholdTable::Cuts c{1.0, 2.0, 3.0};
  ThresholdTable t({c, c, c, c, c, c, c, c});
  EXPECT_EQ(t.classify(K::Noise, 0.5), Severity::None);
  EXPECT_EQ(t.classify(K::Noise, 1.0), Severity::Low);
  EXPECT_EQ(t.classify(K::Noise, 2.5), Severity::Medium);
  EXPECT_EQ(t.classify(K::Noise, 9.0), Severity::High);
  EXPECT_DOUBLE_EQ(t.continuous(K::Noise, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(t.continuous(K::Noise, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(t.continuous(K::Noise, 1.5), 1.5);
  ThresholdTable::Cuts bad{2.0, 1.0, 3.0};
  EXPECT_THROW(ThresholdTable({bad, c, c, c, c, c, c, c}), InvalidArgument);
}

TEST(Thresholds, JsonRoundTrip) {
  const ThresholdTable t;
  EXPECT_EQ(ThresholdTable::from_json(t.to_json()).to_json(), t.to_json());
}

TEST(Calibrate, DynamicProgramMatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto samples = random_samples(seed, 24);
    const ThresholdTable t = calibrate_thresholds(samples);
    for (K k : kAllKinds)
      EXPECT_DOUBLE_EQ(severity_accuracy(t, samples, k), brute_force_accuracy(samples, k)) << "seed " << seed;
  }
}

TEST(Calibrate, SeparableDataIsPerfect) {
  std::vector<CalibrationSample> samples;
  for (int lv = 0; lv < 4; ++lv)
    for (int r = 0; r < 3; ++r) {
      CalibrationSample s;
      s.truth.fill(Severity(lv));
      s.scores.fill(lv * 10.0 + r);
      samples.push_back(s);
    }
  const ThresholdTable t = calibrate_thresholds(samples);
  for (K k : kAllKinds) EXPECT_DOUBLE_EQ(severity_accuracy(t, samples, k), 1.0);
  EXPECT_DOUBLE_EQ(t.cuts(K::Noise)[0], 6.0);
}

TEST(Calibrate, MissingSeverityIsACoverageError) {
  auto samples = random_samples(3, 24);
  for (auto& s : samples)
    if (s.truth[index_of(K::Rain)] == Severity::High) s.truth[index_of(K::Rain)] = Severity::Medium;
  EXPECT_THROW(calibrate_thresholds(samples), CalibrationCoverageError);
}

TEST(Profile, JsonRoundTrip) {
  DegradationProfile p;
  p.severity[index_of(K::Blur)] = Severity::Medium;
  p.scores[index_of(K::Blur)] = 3.25;
  p.low_confidence[index_of(K::LowRes)] = true;
  const auto back = DegradationProfile::from_json(p.to_json());
  EXPECT_EQ(back.to_json(), p.to_json());
  EXPECT_EQ(back.active_kinds(), (KindList{K::Blur}));
}
