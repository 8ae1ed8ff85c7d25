#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "vrestore/degrade/degrade.hpp"
#include "vrestore/error.hpp"
#include "vrestore/orchestrator/orchestrator.hpp"
#include "vrestore/quality/metrics.hpp"

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

class DownIdentifier : public Identifier {
 public:
  DownIdentifier() : Identifier(Severity::Low) {}
  IdentifierKind kind() const override { return IdentifierKind::External; }
  DegradationProfile identify(const Clip&, const IdentifyContext&) override { throw ServiceUnavailable("down"); }
};

class DownAssessor : public Assessor {
 public:
  AssessorKind kind() const override { return AssessorKind::External; }
  double score(const Clip&, const AssessContext&) override { throw ServiceUnavailable("down"); }
};

struct Fixture {
  Clip gt;
  Clip clip;
  GroundTruthLabel label;
};

Fixture degraded(std::vector<DegradationSpec> specs, int frames = 8, std::uint64_t seed = 1) {
  Fixture f;
  f.gt = test::desk_scene(frames, seed);
  auto [c, l] = compose_mixed(f.gt, std::move(specs), "d0");
  f.clip = std::move(c);
  f.label = std::move(l);
  return f;
}

}  // namespace

TEST(SelectBest, Cases) {
  EXPECT_EQ(select_best(std::vector<double>{5}), 0u);
  EXPECT_EQ(select_best(std::vector<double>{10, 30, 20}), 1u);
  EXPECT_EQ(select_best(std::vector<double>{30, 30}), 0u);
  EXPECT_THROW(select_best(std::vector<double>{}), InvalidArgument);
  EXPECT_THROW(select_best(std::vector<Candidate>{}), InvalidArgument);
  const Clip a = test::scene(8, 8, 1);
  EXPECT_EQ(select_best(std::vector<Candidate>{{&a, 1}, {&a, 3}, {&a, 3}}), 1u);
}

TEST(RunConfig, JsonRoundTripAndUnknownKeys) {
  RunConfig c;
  c.strategy = Strategy::Expert;
  c.iteration_cap = 9;
  c.success_threshold = Severity::Low;
  c.seed = 77;
  c.route = KindList{K::Noise, K::Haze};
  c.rollback_depth = 2;
  const RunConfig back = RunConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_THROW(RunConfig::from_json({{"stratgy", "ours"}}), std::exception);
  EXPECT_EQ(default_iteration_cap(2), 10u);
}

TEST(Restore, PristineInputRunsNoTool) {
  const Clip gt = test::desk_scene(4, 2);
  HeuristicIdentifier id;
  NrAssessor nr;
  HeuristicPredictor pred;
  Toolbox tb = default_toolbox();
  const auto run = restore(gt, {}, {&id, nullptr, &nr, nullptr, &pred}, tb, nullptr, {nominal_of(gt), nullptr});
  EXPECT_EQ(run.tool_invocations, 0u);
  EXPECT_EQ(tb.invocations(), 0u);
  EXPECT_EQ(run.output, gt);
  EXPECT_EQ(run.status, RunStatus::Complete);
  EXPECT_FALSE(run.warning);
}

TEST(Restore, SingleNoiseTriesEveryNoiseTool) {
  const auto f = degraded({make_spec(K::Noise, Severity::Medium, 3)});
  OracleIdentifier id(f.label);
  NrAssessor nr;
  HeuristicPredictor pred;
  const Toolbox tb = default_toolbox();
  const auto run = restore(f.clip, {}, {&id, nullptr, &nr, nullptr, &pred}, tb, nullptr, {nominal_of(f.gt), nullptr});
  EXPECT_EQ(run.iterations, 1u);
  EXPECT_EQ(run.tool_invocations, tb.tools_for(K::Noise).size());
  EXPECT_EQ(run.tool_invocations, 3u);
  EXPECT_TRUE(run.final_active().empty());
  EXPECT_GT(psnr(run.output, f.gt), psnr(f.clip, f.gt));
}

TEST(Restore, NoiseAndCompressionWithinTreeBound) {
  const auto f = degraded({make_spec(K::Noise, Severity::Medium, 3), make_spec(K::Compression, Severity::Medium, 4)});
  OracleIdentifier id(f.label);
  NrAssessor nr;
  HeuristicPredictor pred;
  const Toolbox tb = default_toolbox();
  KnowledgeBase kb;
  const auto run = restore(f.clip, {}, {&id, nullptr, &nr, nullptr, &pred}, tb, &kb, {nominal_of(f.gt), nullptr});
  EXPECT_TRUE(run.final_active().empty());
  EXPECT_LE(run.iterations, 4u);
  EXPECT_EQ(run.status, RunStatus::Complete);
  ASSERT_TRUE(run.experience.has_value());
  EXPECT_TRUE(run.experience->success);
  EXPECT_EQ(kb.records().size(), 1u);
  EXPECT_FALSE(kb.rules().empty());
}

TEST(Restore, TraceReplaysAndIsDeterministic) {
  const auto f = degraded({make_spec(K::Haze, Severity::Low, 1), make_spec(K::Noise, Severity::Low, 2)}, 6, 3);
  const Toolbox tb = default_toolbox();
  auto once = [&] {
    OracleIdentifier id(f.label);
    NrAssessor nr;
    HeuristicPredictor pred;
    RunConfig cfg;
    cfg.seed = 5;
    return restore(f.clip, cfg, {&id, nullptr, &nr, nullptr, &pred}, tb, nullptr, {nominal_of(f.gt), nullptr});
  };
  const auto a = once(), b = once();
  EXPECT_EQ(a.output, b.output);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) EXPECT_EQ(a.trace[i], b.trace[i]);

  std::stringstream buf;
  write_trace(a.trace, buf);
  const auto back = read_trace(buf);
  ASSERT_EQ(back.size(), a.trace.size());
  EXPECT_EQ(back.front().at("event"), "start");
  EXPECT_EQ(back.back().at("event"), "output");
  EXPECT_EQ(replay(f.clip, back, tb), a.output);

  ASSERT_FALSE(a.path.empty());
  const Tool* used = tb.find(a.path.at(0).tool);
  ASSERT_NE(used, nullptr);
  if (!used->params.empty()) {
    Toolbox changed = tb;
    nlohmann::json p = used->params;
    auto it = p.begin();
    if (it->is_number()) *it = it->get<double>() + 1.0;
    changed.configure({{"params", {{used->name, p}}}});
    EXPECT_THROW(replay(f.clip, back, changed), DataError);
  }
  EXPECT_THROW(replay(f.clip, {back.front()}, tb), DataError);
}

TEST(Restore, FallbacksAreLogged) {
  const auto f = degraded({make_spec(K::Noise, Severity::Low, 2)}, 4);
  DownIdentifier down_id;
  DownAssessor down_as;
  OracleIdentifier id(f.label);
  NrAssessor nr;
  HeuristicPredictor pred;
  const Toolbox tb = default_toolbox();
  const auto run = restore(f.clip, {}, {&down_id, &id, &down_as, &nr, &pred}, tb, nullptr, {nominal_of(f.gt), nullptr});
  std::set<std::string> components;
  for (const auto& e : run.trace)
    if (e.at("event") == "fallback") components.insert(e.at("component").get<std::string>());
  EXPECT_EQ(components, (std::set<std::string>{"identifier", "assessor"}));
  EXPECT_TRUE(run.final_active().empty());
  EXPECT_THROW(restore(f.clip, {}, {&down_id, nullptr, &nr, nullptr, &pred}, tb, nullptr, {}), ConfigurationError);
}

TEST(Restore, OpenLoopStrategiesNeverRollBack) {
  const auto f = degraded({make_spec(K::Blur, Severity::Medium, 1), make_spec(K::Noise, Severity::Medium, 2)}, 4);
  NrAssessor nr;
  HeuristicPredictor pred;
  const Toolbox tb = default_toolbox();
  for (Strategy s : {Strategy::Reverse, Strategy::Random, Strategy::Expert, Strategy::ZeroShot, Strategy::Experience}) {
    HeuristicIdentifier id;
    RunConfig cfg;
    cfg.strategy = s;
    const auto run = restore(f.clip, cfg, {&id, nullptr, &nr, nullptr, &pred}, tb, nullptr, {nominal_of(f.gt), nullptr});
    EXPECT_EQ(run.rollbacks, 0u) << to_string(s);
    EXPECT_LE(run.iterations, run.cap);
  }
}

TEST(Restore, RandomizedRunsHaltWithinCap) {
  std::mt19937_64 rng(99);
  const Toolbox tb = default_toolbox();
  NrAssessor nr;
  HeuristicPredictor pred;
  const std::vector<Clip> gts = {test::scene(48, 32, 12, 1, "g0"), test::scene(48, 32, 12, 2, "g1")};
  for (int trial = 0; trial < 200; ++trial) {
    const Clip& gt = gts[trial % 2];
    KindList pool(kAllKinds.begin(), kAllKinds.end());
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<DegradationSpec> specs;
    const std::size_t n = 1 + rng() % 3;
    for (std::size_t i = 0; i < n; ++i) specs.push_back(make_spec(pool[i], Severity(1 + rng() % 3), rng()));
    const auto [clip, label] = compose_mixed(gt, specs, "r" + std::to_string(trial));
    OracleIdentifier id(label, trial % 3 == 0);
    RunConfig cfg;
    cfg.strategy = kAllStrategies[rng() % kAllStrategies.size()];
    cfg.seed = rng();
    cfg.record_experience = false;
    const auto run = restore(clip, cfg, {&id, nullptr, &nr, nullptr, &pred}, tb, nullptr, {nominal_of(gt), &gt});
    ASSERT_LE(run.iterations, run.cap) << trial;
    EXPECT_EQ(run.cap, default_iteration_cap(n));
    EXPECT_EQ(run.warning, run.status != RunStatus::Complete) << trial;
    // Each axis is either still degraded or back at the nominal size.
    EXPECT_TRUE(run.output.width() == clip.width() || run.output.width() == gt.width()) << trial;
    EXPECT_TRUE(run.output.height() == clip.height() || run.output.height() == gt.height()) << trial;
    EXPECT_TRUE(run.output.size() == clip.size() || run.output.size() == gt.size()) << trial;
  }
}

TEST(Restore, CapIsHonoured) {
  const auto f = degraded({make_spec(K::Noise, Severity::Medium, 1), make_spec(K::Haze, Severity::Medium, 2)}, 4);
  OracleIdentifier id(f.label);
  NrAssessor nr;
  HeuristicPredictor pred;
  RunConfig cfg;
  cfg.iteration_cap = 1;
  const auto run = restore(f.clip, cfg, {&id, nullptr, &nr, nullptr, &pred}, default_toolbox(), nullptr,
                           {nominal_of(f.gt), nullptr});
  EXPECT_EQ(run.iterations, 1u);
  EXPECT_EQ(run.status, RunStatus::Capped);
  EXPECT_TRUE(run.warning);
}

TEST(Explore, RecordsPlannedAndAlternateOrders) {
  const auto f = degraded({make_spec(K::Noise, Severity::Low, 1), make_spec(K::Compression, Severity::Low, 2)}, 4);
  OracleIdentifier id(f.label);
  NrAssessor nr;
  HeuristicPredictor pred;
  KnowledgeBase kb;
  const auto recs = explore(f.clip, {&id, nullptr, &nr, nullptr, &pred}, default_toolbox(), kb,
                            {nominal_of(f.gt), nullptr}, 1, 3);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_NE(recs[0].sequence, recs[1].sequence);
  EXPECT_EQ(kb.records().size(), 2u);
}
