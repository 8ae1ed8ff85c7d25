#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "vrestore/degrade/dataset.hpp"
#include "vrestore/degrade/degrade.hpp"
#include "vrestore/error.hpp"
#include "vrestore/identify/detectors.hpp"
#include "vrestore/media/color.hpp"
#include "vrestore/parallel.hpp"

using namespace vrestore;
using K = DegradationKind;

namespace {

constexpr Severity kLevels[] = {Severity::Low, Severity::Medium, Severity::High};

double residual_variance(const Clip& a, const Clip& b) {
  double s = 0, s2 = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].data().size(); ++j) {
      const double d = double(a[i].data()[j]) - b[i].data()[j];
      s += d;
      s2 += d * d;
      ++n;
    }
  return s2 / n - (s / n) * (s / n);
}

double mean_gradient(const Clip& c) {
  double s = 0;
  std::size_t n = 0;
  for (const auto& f : c.frames()) {
    const Plane y = f.luma();
    for (int r = 0; r < y.height; ++r)
      for (int x = 1; x < y.width; ++x, ++n) s += std::abs(y(x, r) - y(x - 1, r));
  }
  return s / n;
}

std::pair<double, double> value_stats(const Clip& c) {
  double s = 0, s2 = 0;
  std::size_t n = 0;
  for (const auto& f : c.frames()) {
    const Frame hsv = rgb_to_hsv(f);
    for (std::size_t p = 0; p < f.pixel_count(); ++p, ++n) {
      const double v = hsv.data()[p * 3 + 2];
      s += v;
      s2 += v * v;
    }
  }
  const double m = s / n;
  return {m, std::sqrt(std::max(0.0, s2 / n - m * m))};
}

double mean_blockiness(const Clip& c) {
  double s = 0;
  for (const auto& f : c.frames()) s += blockiness_score(f.luma());
  return s / c.size();
}

template <typename Stat>
std::vector<double> across_levels(const Clip& gt, K kind, Stat stat) {
  std::vector<double> out;
  for (Severity s : kLevels) out.push_back(stat(apply_degradation(gt, make_spec(kind, s, 5))));
  return out;
}

}  // namespace

TEST(Degrade, DeterministicAcrossThreadCaps) {
  const Clip gt = test::scene(64, 48, 5);
  const unsigned before = thread_cap().load();
  for (K k : kAllKinds) {
    const auto spec = make_spec(k, Severity::Medium, 17);
    set_thread_cap(1);
    const Clip a = apply_degradation(gt, spec);
    set_thread_cap(4);
    const Clip b = apply_degradation(gt, spec);
    EXPECT_EQ(a, b) << to_string(k);
    EXPECT_EQ(a, apply_degradation(gt, spec)) << to_string(k);
  }
  set_thread_cap(before);
}

TEST(Degrade, NoiseVarianceGrowsWithSeverity) {
  const Clip gt = test::scene(96, 64, 3);
  const auto v = across_levels(gt, K::Noise, [&](const Clip& c) { return residual_variance(c, gt); });
  EXPECT_LT(v[0], v[1]);
  EXPECT_LT(v[1], v[2]);
}

TEST(Degrade, BlurLowersGradient) {
  const Clip gt = test::scene(96, 64, 3);
  const auto g = across_levels(gt, K::Blur, mean_gradient);
  EXPECT_GT(mean_gradient(gt), g[0]);
  EXPECT_GT(g[0], g[1]);
  EXPECT_GT(g[1], g[2]);
}

TEST(Degrade, LowLightLowersValue) {
  const Clip gt = test::scene(96, 64, 3);
  const auto m = across_levels(gt, K::LowLight, [](const Clip& c) { return value_stats(c).first; });
  EXPECT_GT(value_stats(gt).first, m[0]);
  EXPECT_GT(m[0], m[1]);
  EXPECT_GT(m[1], m[2]);
}

TEST(Degrade, CompressionRaisesBlockiness) {
  const Clip gt = test::scene(128, 96, 2);
  const auto b = across_levels(gt, K::Compression, mean_blockiness);
  EXPECT_LT(mean_blockiness(gt), b[0]);
  EXPECT_LT(b[0], b[1]);
  EXPECT_LT(b[1], b[2]);
}

TEST(Degrade, HazeFlattensValue) {
  const Clip gt = test::scene(96, 64, 3);
  const auto s = across_levels(gt, K::Haze, [](const Clip& c) { return value_stats(c).second; });
  EXPECT_GT(value_stats(gt).second, s[0]);
  EXPECT_GT(s[0], s[1]);
  EXPECT_GT(s[1], s[2]);
}

TEST(Degrade, GeometryChangesOnlyForSampling) {
  const Clip gt = test::scene(96, 63, 12);
  for (K k : kAllKinds) {
    const Clip d = apply_degradation(gt, make_spec(k, Severity::Medium, 1));
    if (k == K::LowRes) {
      const int f = std::get<LowResParams>(default_params(k, Severity::Medium)).factor;
      EXPECT_EQ(d.width(), 96 / f);
      EXPECT_EQ(d.height(), 63 / f);
      EXPECT_EQ(d.size(), gt.size());
    } else if (k == K::LowFps) {
      const int s = std::get<LowFpsParams>(default_params(k, Severity::Medium)).step;
      EXPECT_EQ(d.size(), (gt.size() + s - 1) / s);
      EXPECT_DOUBLE_EQ(d.fps(), gt.fps() / s);
      EXPECT_EQ(d[1], gt[s]);
    } else {
      EXPECT_TRUE(same_shape(d, gt)) << to_string(k);
    }
  }
}

TEST(Degrade, CanonicalMixedOrder) {
  EXPECT_EQ(canonical_mixed_order({K::Compression, K::Noise, K::Haze}), (KindList{K::Haze, K::Noise, K::Compression}));
  EXPECT_EQ(canonical_mixed_order({K::LowFps, K::Blur}), (KindList{K::Blur, K::LowFps}));
  EXPECT_EQ(canonical_mixed_order({K::Rain, K::LowLight}), (KindList{K::LowLight, K::Rain}));
  EXPECT_THROW(canonical_mixed_order({K::Noise, K::Noise}), InvalidArgument);
  EXPECT_THROW(canonical_mixed_order({}), InvalidArgument);
  EXPECT_THROW(canonical_mixed_order({K::Noise, K::Blur, K::Rain, K::Haze}), InvalidArgument);
}

TEST(Degrade, ComposeMixedMatchesSequentialApply) {
  const Clip gt = test::scene(64, 48, 4);
  const auto n = make_spec(K::Noise, Severity::Low, 3);
  const auto c = make_spec(K::Compression, Severity::Low, 4);
  const auto [out, label] = compose_mixed(gt, {c, n}, "d0");
  EXPECT_EQ(out.id(), "d0");
  EXPECT_EQ(label.kinds(), (KindList{K::Noise, K::Compression}));
  EXPECT_EQ(label.gt_clip_id, gt.id());
  EXPECT_EQ(out, apply_degradation(apply_degradation(gt, n), c).with_id("d0"));
}

TEST(Degrade, SpecJsonRoundTrip) {
  for (K k : kAllKinds)
    for (Severity s : kLevels) {
      const auto spec = make_spec(k, s, 99);
      const auto back = spec_from_json(to_json(spec));
      EXPECT_EQ(to_json(back), to_json(spec));
      EXPECT_EQ(back.kind, k);
      EXPECT_EQ(back.severity, s);
    }
  const GroundTruthLabel label{"d", {make_spec(K::Haze, Severity::High, 1), make_spec(K::Noise, Severity::Low, 2)}, "g"};
  EXPECT_EQ(to_json(label_from_json(to_json(label))), to_json(label));
}

TEST(Degrade, ValidateRejectsBadSpecs) {
  auto spec = make_spec(K::Noise, Severity::Low);
  spec.severity = Severity::None;
  EXPECT_THROW(validate(spec), InvalidArgument);
  spec = make_spec(K::Noise, Severity::Low);
  spec.params = BlurParams{};
  EXPECT_THROW(validate(spec), InvalidArgument);
  spec = make_spec(K::LowRes, Severity::Low);
  spec.params = LowResParams{1};
  EXPECT_THROW(validate(spec), InvalidArgument);
  spec = make_spec(K::LowLight, Severity::Low);
  spec.params = LowLightParams{1.2, 0.0};
  EXPECT_THROW(validate(spec), InvalidArgument);
  EXPECT_THROW(apply_degradation(test::scene(16, 16, 3), make_spec(K::LowFps, Severity::High)), InvalidArgument);
}

TEST(Dataset, SynthesizeCountsAndDeterminism) {
  const std::vector<Clip> gts = {test::scene(48, 32, 8, 1, "g0"), test::scene(48, 32, 8, 2, "g1")};
  const DatasetRecipe recipe{{3, 2, 1}};
  const auto a = synthesize(gts, recipe, 7);
  ASSERT_EQ(a.size(), 2u * 6);
  std::array<int, 3> arity{};
  for (const auto& g : a) {
    const auto kinds = g.label.kinds();
    ASSERT_GE(kinds.size(), 1u);
    ASSERT_LE(kinds.size(), 3u);
    ++arity[kinds.size() - 1];
    EXPECT_EQ(kinds, canonical_mixed_order(kinds));
    EXPECT_EQ(g.clip.id(), g.label.clip_id);
  }
  EXPECT_EQ(arity, (std::array<int, 3>{6, 4, 2}));
  const auto b = synthesize(gts, recipe, 7);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].clip, b[i].clip);
}

TEST(Dataset, SinglesCycleThroughAllKinds) {
  const std::vector<Clip> gts = {test::scene(48, 32, 8, 1, "g0")};
  const auto items = synthesize(gts, DatasetRecipe{{8, 0, 0}}, 3);
  std::set<K> seen;
  for (const auto& g : items) seen.insert(g.label.kinds().front());
  EXPECT_EQ(seen.size(), kKindCount);
}

TEST(Dataset, ManifestRoundTrip) {
  const auto dir = test::temp_dir("dataset");
  const std::vector<Clip> gts = {test::scene(32, 24, 6, 1, "g0")};
  const auto m = generate_dataset(gts, DatasetRecipe{{2, 1, 0}}, 5, dir);
  const auto back = load_manifest(dir / "dataset.json");
  EXPECT_EQ(back.to_json(), m.to_json());
  ASSERT_EQ(back.degraded.size(), 3u);
  EXPECT_NE(back.find_label(back.degraded[0].id), nullptr);
  EXPECT_NE(back.find_gt("g0"), nullptr);
  EXPECT_EQ(back.find_label("nope"), nullptr);
}
