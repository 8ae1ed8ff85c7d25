#include "vrestore/cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vrestore/degrade/dataset.hpp"
#include "vrestore/error.hpp"
#include "vrestore/identify/identifier.hpp"
#include "vrestore/media/clip_io.hpp"
#include "vrestore/media/scene.hpp"
#include "vrestore/net/http.hpp"
#include "vrestore/orchestrator/orchestrator.hpp"
#include "vrestore/parallel.hpp"
#include "vrestore/quality/assess.hpp"
#include "vrestore/quality/metrics.hpp"
#include "vrestore/quality/mos.hpp"
#include "vrestore/router/complexity.hpp"
#include "vrestore/version.hpp"

namespace vrestore {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const ServiceUnavailable*>(&e)) return kExitIo;
  if (dynamic_cast<const DataError*>(&e) || dynamic_cast<const InvalidFormat*>(&e)) return kExitData;
  if (dynamic_cast<const json::exception*>(&e)) return kExitData;
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return kExitIo;
  return kExitUsage;
}

namespace {

json read_json_file(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError(IoError::Code::NotFound, "cannot open " + file.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidFormat(file.string() + ": " + e.what());
  }
}

void write_json_file(const json& j, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError(IoError::Code::WriteFailed, "cannot write " + file.string());
  out << j.dump(2) << '\n';
}

std::ofstream open_output(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError(IoError::Code::WriteFailed, "cannot write " + file.string());
  return out;
}

bool is_clip_dir(const fs::path& dir) { return fs::is_regular_file(dir / "manifest.json"); }

// A clip directory, or a directory of clip directories in name order.
std::vector<fs::path> clip_dirs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError(IoError::Code::NotFound, "no such directory " + dir.string());
  if (is_clip_dir(dir)) return {dir};
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory() && is_clip_dir(e.path())) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  if (out.empty()) throw IoError(IoError::Code::MissingManifest, "no clips under " + dir.string());
  return out;
}

NominalFormat nominal_of(const Clip& c) { return {c.width(), c.height(), c.fps(), c.size()}; }

struct NominalFlags {
  std::optional<int> width, height;
  std::optional<double> fps;
  std::optional<std::size_t> frames;

  void add_to(CLI::App* app) {
    app->add_option("--width", width, "Nominal width");
    app->add_option("--height", height, "Nominal height");
    app->add_option("--fps", fps, "Nominal frame rate");
    app->add_option("--frames", frames, "Nominal frame count");
  }
  // Flags win over the reference's format.
  NominalFormat resolve(const Clip* reference) const {
    NominalFormat n = reference ? nominal_of(*reference) : NominalFormat{};
    if (width) n.width = width;
    if (height) n.height = height;
    if (fps) n.fps = fps;
    if (frames) n.frames = frames;
    return n;
  }
};

// Loads a dataset manifest and, on request, the ground truth of a clip.
struct DatasetContext {
  std::optional<DatasetManifest> manifest;

  explicit DatasetContext(const std::string& path) {
    if (!path.empty()) manifest = load_manifest(path);
  }
  const GroundTruthLabel* label(const std::string& clip_id) const {
    return manifest ? manifest->find_label(clip_id) : nullptr;
  }
  std::optional<Clip> reference_for(const std::string& clip_id) const {
    const auto* l = label(clip_id);
    if (!l) return std::nullopt;
    const auto* g = manifest->find_gt(l->gt_clip_id);
    if (!g) return std::nullopt;
    return load_clip(manifest->root / g->path);
  }
};

ThresholdTable load_thresholds(const std::string& path) {
  return path.empty() ? ThresholdTable{} : ThresholdTable::from_json(read_json_file(path));
}

fs::path scratch_dir() { return fs::temp_directory_path() / "vrestore-adapter"; }

struct AgentSet {
  std::unique_ptr<Identifier> identifier, fallback_identifier;
  std::unique_ptr<Assessor> assessor, fallback_assessor;
  std::unique_ptr<RoutePredictor> predictor;

  Agents view() const {
    return {identifier.get(), fallback_identifier.get(), assessor.get(), fallback_assessor.get(), predictor.get()};
  }
};

std::unique_ptr<Identifier> make_identifier(IdentifierKind kind, const GroundTruthLabel* label,
                                            const ThresholdTable& table, bool verify,
                                            std::unique_ptr<Identifier>* fallback) {
  switch (kind) {
    case IdentifierKind::Oracle:
      if (!label) throw ConfigurationError("oracle identifier needs --manifest with a label for this clip");
      return std::make_unique<OracleIdentifier>(*label, verify);
    case IdentifierKind::Heuristic: return std::make_unique<HeuristicIdentifier>(table);
    case IdentifierKind::External:
      if (fallback) *fallback = std::make_unique<HeuristicIdentifier>(table);
      return std::make_unique<ExternalIdentifier>(adapter_base_url(), scratch_dir());
  }
  throw InvalidArgument("unknown identifier");
}

AgentSet make_agents(const std::string& identifier, const std::string& assessor, const std::string& predictor,
                     const GroundTruthLabel* label, const ThresholdTable& table, bool verify) {
  AgentSet a;
  a.identifier = make_identifier(parse_identifier_kind(identifier), label, table, verify, &a.fallback_identifier);
  switch (parse_assessor_kind(assessor)) {
    case AssessorKind::NoReference: a.assessor = std::make_unique<NrAssessor>(table); break;
    case AssessorKind::Psnr: a.assessor = std::make_unique<PsnrAssessor>(); break;
    case AssessorKind::External:
      a.assessor = std::make_unique<ExternalAssessor>(adapter_base_url(), scratch_dir());
      a.fallback_assessor = std::make_unique<NrAssessor>(table);
      break;
  }
  if (predictor == "heuristic") {
    a.predictor = std::make_unique<HeuristicPredictor>();
  } else if (predictor == "external") {
    a.predictor = std::make_unique<FallbackPredictor>(std::make_unique<ExternalPredictor>(adapter_base_url()),
                                                      std::make_unique<HeuristicPredictor>());
  } else {
    throw InvalidArgument("unknown predictor '" + predictor + "' (heuristic, external)");
  }
  return a;
}

void write_csv_header(std::ostream& out, std::uint64_t seed, const std::string& header) {
  out << csv_provenance(seed) << '\n' << header << '\n' << std::setprecision(10);
}

json path_json(const std::vector<AppliedStep>& path) {
  json j = json::array();
  for (const auto& s : path) j.push_back({{"kind", std::string(to_string(s.kind))}, {"tool", s.tool}});
  return j;
}

// Applies a JSON config document as extra flags. Keys are option names
// without dashes; a key naming the subcommand holds an object for it.
std::vector<std::string> config_args(const json& config, CLI::App& app, const std::string& sub_name) {
  if (!config.is_object()) throw InvalidFormat("config must be a JSON object");
  CLI::App* sub = sub_name.empty() ? nullptr : app.get_subcommand(sub_name);
  std::vector<std::string> global, local;
  auto emit = [](std::vector<std::string>& out, const std::string& key, const json& v) {
    const std::string flag = "--" + key;
    if (v.is_boolean()) {
      if (v.get<bool>()) out.push_back(flag);
    } else if (v.is_array()) {
      for (const auto& e : v) {
        out.push_back(flag);
        out.push_back(e.is_string() ? e.get<std::string>() : e.dump());
      }
    } else {
      out.push_back(flag);
      out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
  };
  auto place = [&](const std::string& key, const json& v) {
    if (sub && sub->get_option_no_throw("--" + key)) emit(local, key, v);
    else if (app.get_option_no_throw("--" + key)) emit(global, key, v);
    else throw ConfigurationError("config key '" + key + "' is not an option of '" + sub_name + "'");
  };
  for (const auto& [key, v] : config.items()) {
    if (app.get_subcommand_no_throw(key)) {
      if (key != sub_name) continue;
      if (!v.is_object()) throw InvalidFormat("config section '" + key + "' must be an object");
      for (const auto& [k2, v2] : v.items()) place(k2, v2);
    } else if (key != "config") {
      place(key, v);
    }
  }
  global.insert(global.end(), local.begin(), local.end());
  return global;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

}  // namespace

int run_cli(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Desk-scale multi-degradation video restoration"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  unsigned threads = 0;
  app.add_option("--config", config_path, "JSON file supplying any flag; flags on the command line win");
  app.add_option("--threads", threads, "Worker thread cap (default: hardware concurrency)");

  // gen-gt
  auto* gen = app.add_subcommand("gen-gt", "Write synthetic ground-truth clips");
  std::string gen_out;
  int gen_count = 2;
  SceneOptions scene;
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--count", gen_count, "Number of clips")->check(CLI::PositiveNumber);
  gen->add_option("--width", scene.width)->check(CLI::PositiveNumber);
  gen->add_option("--height", scene.height)->check(CLI::PositiveNumber);
  gen->add_option("--frames", scene.frames)->check(CLI::PositiveNumber);
  gen->add_option("--fps", scene.fps)->check(CLI::PositiveNumber);
  gen->add_option("--seed", scene.seed);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a degraded dataset from ground-truth clips");
  std::string synth_gt, synth_out, synth_recipe;
  std::uint64_t synth_seed = 0;
  synth->add_option("--gt", synth_gt, "Ground-truth clip directory (or directory of clips)")->required();
  synth->add_option("--out", synth_out, "Dataset directory")->required();
  synth->add_option("--recipe", synth_recipe, "Recipe JSON file {\"per_arity\": [singles, doubles, triples]}");
  synth->add_option("--seed", synth_seed, "Master seed");

  // identify
  auto* ident = app.add_subcommand("identify", "Print a degradation profile as JSON");
  std::string id_clip, id_kind = "heuristic", id_manifest, id_thresholds;
  NominalFlags id_nominal;
  ident->add_option("--clip", id_clip, "Clip directory")->required();
  ident->add_option("--identifier", id_kind, "oracle, heuristic or external");
  ident->add_option("--manifest", id_manifest, "Dataset manifest (labels for oracle, nominal format)");
  ident->add_option("--thresholds", id_thresholds, "Threshold table JSON from calibrate");
  id_nominal.add_to(ident);

  // restore
  auto* rest = app.add_subcommand("restore", "Run the closed restoration loop on one clip");
  std::string r_clip, r_out, r_strategy = "ours", r_identifier = "heuristic", r_assessor = "nr", r_predictor = "heuristic";
  std::string r_kb, r_trace, r_manifest, r_ref, r_thresholds, r_toolbox;
  std::uint64_t r_seed = 0;
  std::optional<std::size_t> r_cap;
  std::size_t r_depth = kDefaultRollbackDepth;
  bool r_verify = false, r_no_record = false;
  NominalFlags r_nominal;
  rest->add_option("--clip", r_clip, "Input clip directory")->required();
  rest->add_option("--out", r_out, "Output clip directory")->required();
  rest->add_option("--strategy", r_strategy, "reverse, random, expert, zero-shot, experience, ours");
  rest->add_option("--identifier", r_identifier, "oracle, heuristic or external");
  rest->add_option("--assessor", r_assessor, "nr, psnr or external");
  rest->add_option("--predictor", r_predictor, "heuristic or external");
  rest->add_option("--kb", r_kb, "Knowledge base JSON (read, then updated)");
  rest->add_option("--trace", r_trace, "Write the JSONL event trace here");
  rest->add_option("--manifest", r_manifest, "Dataset manifest (oracle labels, reference clip)");
  rest->add_option("--ref", r_ref, "Reference clip directory");
  rest->add_option("--thresholds", r_thresholds, "Threshold table JSON");
  rest->add_option("--toolbox", r_toolbox, "Toolbox config JSON {\"disable\": [...], \"params\": {...}}");
  rest->add_option("--seed", r_seed);
  rest->add_option("--iteration-cap", r_cap);
  rest->add_option("--rollback-depth", r_depth);
  rest->add_flag("--verify-reference", r_verify, "Oracle counts a subtask only if PSNR does not drop");
  rest->add_flag("--no-record", r_no_record, "Do not record the run into the knowledge base");
  r_nominal.add_to(rest);

  // replay
  auto* rep = app.add_subcommand("replay", "Re-apply the tool path of a trace");
  std::string rp_clip, rp_trace, rp_out, rp_toolbox;
  rep->add_option("--clip", rp_clip, "Input clip directory")->required();
  rep->add_option("--trace", rp_trace, "Trace file")->required();
  rep->add_option("--out", rp_out, "Output clip directory")->required();
  rep->add_option("--toolbox", rp_toolbox, "Toolbox config JSON used for the run");

  // explore
  auto* expl = app.add_subcommand("explore", "Self-exploration: try alternative orders and record them");
  std::string ex_clip, ex_kb, ex_identifier = "heuristic", ex_assessor = "nr", ex_manifest, ex_thresholds;
  std::size_t ex_alternates = 1;
  std::uint64_t ex_seed = 0;
  bool ex_verify = false;
  expl->add_option("--clip", ex_clip, "Clip directory or directory of clips")->required();
  expl->add_option("--kb", ex_kb, "Knowledge base JSON")->required();
  expl->add_option("--identifier", ex_identifier);
  expl->add_option("--assessor", ex_assessor);
  expl->add_option("--manifest", ex_manifest);
  expl->add_option("--thresholds", ex_thresholds);
  expl->add_option("--alternates", ex_alternates, "Extra orderings per clip");
  expl->add_option("--seed", ex_seed);
  expl->add_flag("--verify-reference", ex_verify);

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Fit detector thresholds on a labeled dataset");
  std::string cal_manifest, cal_out;
  cal->add_option("--manifest", cal_manifest, "Dataset manifest")->required();
  cal->add_option("--out", cal_out, "Threshold table JSON")->required();

  // bench-routing
  auto* bench = app.add_subcommand("bench-routing", "Simulated tool invocations per routing strategy");
  int b_nmin = 1, b_nmax = 5;
  double b_p = 0.8, b_cost = 1.0;
  std::size_t b_trials = 10000;
  std::uint64_t b_seed = 0;
  std::string b_out;
  bench->add_option("--n-min", b_nmin)->check(CLI::Range(1, 6));
  bench->add_option("--n-max", b_nmax)->check(CLI::Range(1, 6));
  bench->add_option("--p", b_p, "Per-step success probability");
  bench->add_option("--trials", b_trials)->check(CLI::PositiveNumber);
  bench->add_option("--seed", b_seed);
  bench->add_option("--cost", b_cost, "Runtime cost per invocation");
  bench->add_option("--out", b_out, "CSV file (default stdout)");

  // eval
  auto* ev = app.add_subcommand("eval", "PSNR / SSIM / no-reference score table");
  std::string ev_test, ev_ref, ev_out, ev_manifest, ev_thresholds;
  ev->add_option("--test", ev_test, "Clip directory or directory of clips")->required();
  ev->add_option("--ref", ev_ref, "Reference clip or directory of references (matched by id)");
  ev->add_option("--manifest", ev_manifest, "Dataset manifest to pair clips with their ground truth");
  ev->add_option("--thresholds", ev_thresholds);
  ev->add_option("--out", ev_out, "CSV file (default stdout)");

  // mos
  auto* mos = app.add_subcommand("mos", "Outlier screening and MOS from a ratings CSV");
  std::string m_ratings, m_out;
  bool m_no_screen = false;
  mos->add_option("--ratings", m_ratings, "CSV subject,video,score")->required();
  mos->add_option("--out", m_out, "CSV file (default stdout)");
  mos->add_flag("--no-screen", m_no_screen, "Skip outlier rejection");

  try {
    std::vector<std::string> args = args_in;
    // Resolve --config before the real parse so its values act as defaults.
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string cfg;
      if (args[i] == "--config" && i + 1 < args.size()) cfg = args[i + 1];
      else if (args[i].rfind("--config=", 0) == 0) cfg = args[i].substr(9);
      if (cfg.empty()) continue;
      std::string sub_name;
      for (const auto& a : args)
        if (app.get_subcommand_no_throw(a)) {
          sub_name = a;
          break;
        }
      const auto extra = config_args(read_json_file(cfg), app, sub_name);
      for (std::size_t k = 0; k < extra.size(); ++k) {
        if (extra[k].rfind("--", 0) != 0) continue;
        std::size_t end = k + 1;
        while (end < extra.size() && extra[end].rfind("--", 0) != 0) ++end;
        if (!has_flag(args_in, extra[k])) args.insert(args.end(), extra.begin() + std::ptrdiff_t(k), extra.begin() + std::ptrdiff_t(end));
      }
      break;
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }

  try {
    if (threads > 0) set_thread_cap(threads);

    if (gen->parsed()) {
      fs::create_directories(gen_out);
      for (int i = 0; i < gen_count; ++i) {
        SceneOptions o = scene;
        o.seed = scene.seed + std::uint64_t(i);
        std::ostringstream id;
        id << "gt" << std::setw(3) << std::setfill('0') << i;
        save_clip(make_scene_clip(o, id.str()), fs::path(gen_out) / id.str());
        out << id.str() << '\n';
      }
      return kExitOk;
    }

    if (synth->parsed()) {
      std::vector<Clip> gts;
      for (const auto& d : clip_dirs(synth_gt)) gts.push_back(load_clip(d));
      const DatasetRecipe recipe = synth_recipe.empty() ? DatasetRecipe{} : DatasetRecipe::from_json(read_json_file(synth_recipe));
      const auto m = generate_dataset(gts, recipe, synth_seed, synth_out);
      out << "wrote " << m.degraded.size() << " degraded clips from " << m.gt.size() << " ground-truth clips to "
          << (fs::path(synth_out) / "dataset.json").string() << '\n';
      return kExitOk;
    }

    if (ident->parsed()) {
      const Clip clip = load_clip(id_clip);
      const DatasetContext ds(id_manifest);
      const auto ref = ds.reference_for(clip.id());
      const auto table = load_thresholds(id_thresholds);
      std::unique_ptr<Identifier> fallback;
      auto identifier = make_identifier(parse_identifier_kind(id_kind), ds.label(clip.id()), table, false, &fallback);
      const IdentifyContext ctx{id_nominal.resolve(ref ? &*ref : nullptr), nullptr};
      DegradationProfile p;
      try {
        p = identifier->identify(clip, ctx);
      } catch (const ServiceUnavailable& e) {
        if (!fallback) throw;
        err << "warning: " << e.what() << "; using heuristic identifier\n";
        p = fallback->identify(clip, ctx);
      }
      json j = p.to_json();
      j["clip"] = clip.id();
      j["active"] = kinds_to_json(p.active_kinds());
      out << j.dump(2) << '\n';
      return kExitOk;
    }

    if (rest->parsed()) {
      const Clip clip = load_clip(r_clip);
      const DatasetContext ds(r_manifest);
      std::optional<Clip> ref = r_ref.empty() ? ds.reference_for(clip.id()) : std::optional<Clip>(load_clip(r_ref));
      const auto table = load_thresholds(r_thresholds);
      auto agents = make_agents(r_identifier, r_assessor, r_predictor, ds.label(clip.id()), table, r_verify);
      Toolbox toolbox = default_toolbox();
      if (!r_toolbox.empty()) toolbox.configure(read_json_file(r_toolbox));
      KnowledgeBase kb = r_kb.empty() ? KnowledgeBase{} : KnowledgeBase::load(r_kb);

      RunConfig cfg;
      cfg.strategy = parse_strategy(r_strategy);
      cfg.seed = r_seed;
      cfg.iteration_cap = r_cap;
      cfg.rollback_depth = r_depth;
      cfg.record_experience = !r_no_record && !r_kb.empty();
      const RunInputs inputs{r_nominal.resolve(ref ? &*ref : nullptr), ref ? &*ref : nullptr};
      const RestorationRun run = restore(clip, cfg, agents.view(), toolbox, r_kb.empty() ? nullptr : &kb, inputs);

      save_clip(run.output, r_out);
      if (!r_trace.empty()) write_trace(run.trace, fs::path(r_trace));
      if (cfg.record_experience) kb.save(r_kb);

      json summary = {{"clip", clip.id()},
                      {"status", std::string(to_string(run.status))},
                      {"iterations", run.iterations},
                      {"cap", run.cap},
                      {"tool_invocations", run.tool_invocations},
                      {"rollbacks", run.rollbacks},
                      {"initial_active", kinds_to_json(run.initial_profile.active_kinds())},
                      {"final_active", kinds_to_json(run.final_active())},
                      {"path", path_json(run.path)},
                      {"score", run.output_score}};
      if (ref) {
        summary["input_psnr_db"] = psnr(align_to_reference(clip, *ref), *ref);
        summary["output_psnr_db"] = psnr(align_to_reference(run.output, *ref), *ref);
      }
      out << summary.dump(2) << '\n';
      if (run.warning) {
        err << "warning: restoration ended " << to_string(run.status) << " with subtasks left\n";
        return kExitWarning;
      }
      return kExitOk;
    }

    if (rep->parsed()) {
      Toolbox toolbox = default_toolbox();
      if (!rp_toolbox.empty()) toolbox.configure(read_json_file(rp_toolbox));
      save_clip(replay(load_clip(rp_clip), read_trace(fs::path(rp_trace)), toolbox), rp_out);
      return kExitOk;
    }

    if (expl->parsed()) {
      const DatasetContext ds(ex_manifest);
      const auto table = load_thresholds(ex_thresholds);
      KnowledgeBase kb = KnowledgeBase::load(ex_kb);
      const Toolbox toolbox = default_toolbox();
      std::size_t added = 0;
      for (const auto& dir : clip_dirs(ex_clip)) {
        const Clip clip = load_clip(dir);
        const auto ref = ds.reference_for(clip.id());
        auto agents = make_agents(ex_identifier, ex_assessor, "heuristic", ds.label(clip.id()), table, ex_verify);
        const RunInputs inputs{ref ? nominal_of(*ref) : NominalFormat{}, ref ? &*ref : nullptr};
        for (const auto& r : explore(clip, agents.view(), toolbox, kb, inputs, ex_alternates, ex_seed)) {
          out << r.id << ' ' << (r.success ? "success" : "failure") << ' ' << r.score << '\n';
          ++added;
        }
      }
      kb.save(ex_kb);
      out << "recorded " << added << " experiences; " << kb.rules().size() << " kind sets with rules\n";
      return kExitOk;
    }

    if (cal->parsed()) {
      const auto manifest = load_manifest(cal_manifest);
      const auto samples = collect_calibration_samples(manifest);
      const auto table = calibrate_thresholds(samples);
      write_json_file(table.to_json(), cal_out);
      out << std::fixed << std::setprecision(3);
      for (auto k : kAllKinds) out << to_string(k) << " severity accuracy " << severity_accuracy(table, samples, k) << '\n';
      return kExitOk;
    }

    if (bench->parsed()) {
      if (b_nmin > b_nmax) throw InvalidArgument("--n-min exceeds --n-max");
      std::ofstream file;
      if (!b_out.empty()) file = open_output(b_out);
      std::ostream& o = b_out.empty() ? out : file;
      write_csv_header(o, b_seed,
                       "n,strategy,p,trials,mean_invocations,min_invocations,max_invocations,runtime,exhausted_fraction,"
                       "t_full,t_tree,t_ours");
      for (int n = b_nmin; n <= b_nmax; ++n)
        for (const auto& s : simulation_strategies()) {
          const auto st = simulate_strategy(n, s, b_p, b_trials, b_seed, b_cost);
          o << n << ',' << s << ',' << b_p << ',' << b_trials << ',' << st.mean << ',' << st.min << ',' << st.max << ','
            << st.runtime << ',' << st.exhausted_fraction << ',' << t_full(n) << ',' << t_tree(n) << ','
            << t_ours(n, b_p) << '\n';
        }
      return kExitOk;
    }

    if (ev->parsed()) {
      const DatasetContext ds(ev_manifest);
      const auto table = load_thresholds(ev_thresholds);
      std::optional<Clip> single_ref;
      if (!ev_ref.empty() && is_clip_dir(ev_ref)) single_ref = load_clip(ev_ref);
      std::ofstream file;
      if (!ev_out.empty()) file = open_output(ev_out);
      std::ostream& o = ev_out.empty() ? out : file;
      write_csv_header(o, 0, "clip,psnr_db,ssim,nr_score");
      for (const auto& dir : clip_dirs(ev_test)) {
        const Clip clip = load_clip(dir);
        std::optional<Clip> ref = single_ref;
        if (!ref && !ev_ref.empty() && is_clip_dir(fs::path(ev_ref) / clip.id())) ref = load_clip(fs::path(ev_ref) / clip.id());
        if (!ref) ref = ds.reference_for(clip.id());
        const auto rep = assess(clip, ref ? &*ref : nullptr, ref ? nominal_of(*ref) : NominalFormat{}, table);
        o << clip.id() << ',';
        if (rep.psnr_db) o << *rep.psnr_db;
        o << ',';
        if (rep.ssim) o << *rep.ssim;
        o << ',' << rep.nr_score << '\n';
      }
      return kExitOk;
    }

    if (mos->parsed()) {
      RatingMatrix m(read_ratings_csv(fs::path(m_ratings)));
      if (!m_no_screen) {
        auto screened = reject_outliers(m);
        for (const auto& s : screened.rejected) err << "rejected subject " << s << '\n';
        m = std::move(screened.matrix);
      }
      const auto entries = compute_mos(m);
      if (m_out.empty()) {
        write_mos_csv(out, entries);
      } else {
        auto file = open_output(m_out);
        write_mos_csv(file, entries);
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitUsage;
}

}  // namespace vrestore
