#include "vrestore/degrade/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "vrestore/error.hpp"
#include "vrestore/media/clip_io.hpp"
#include "vrestore/parallel.hpp"

namespace vrestore {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a combined state.
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DatasetRecipe DatasetRecipe::from_json(const json& j) {
  DatasetRecipe r;
  try {
    // Accepts [s, d, t], {"per_arity": [s, d, t]} or {"single", "double", "triple"}.
    const json& arr = j.is_object() && j.contains("per_arity") ? j.at("per_arity") : j;
    if (arr.is_array()) {
      if (arr.size() != 3) throw InvalidArgument("recipe array must hold 3 counts");
      for (int i = 0; i < 3; ++i) r.per_arity[i] = arr[i].get<int>();
    } else if (j.is_object()) {
      r.per_arity = {j.value("single", 0), j.value("double", 0), j.value("triple", 0)};
    } else {
      throw InvalidArgument("recipe must be an array or an object");
    }
    if (j.is_object())
      for (const auto& [key, v] : j.items())
        if (key != "per_arity" && key != "single" && key != "double" && key != "triple")
          throw InvalidArgument("unknown recipe key '" + key + "'");
    for (int n : r.per_arity)
      if (n < 0) throw InvalidArgument("recipe counts must be non-negative");
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed recipe: ") + e.what());
  }
  return r;
}

json DatasetRecipe::to_json() const {
  return {{"single", per_arity[0]}, {"double", per_arity[1]}, {"triple", per_arity[2]}};
}

const GroundTruthLabel* DatasetManifest::find_label(const std::string& clip_id) const {
  for (const auto& l : labels)
    if (l.clip_id == clip_id) return &l;
  return nullptr;
}

const GtEntry* DatasetManifest::find_gt(const std::string& gt_id) const {
  for (const auto& g : gt)
    if (g.id == gt_id) return &g;
  return nullptr;
}

json DatasetManifest::to_json() const {
  json j;
  j["seed"] = seed;
  j["recipe"] = recipe.to_json();
  j["gt"] = json::array();
  for (const auto& g : gt)
    j["gt"].push_back({{"id", g.id}, {"path", g.path}, {"width", g.width}, {"height", g.height}, {"fps", g.fps},
                       {"frames", g.frames}});
  j["degraded"] = json::array();
  for (const auto& d : degraded) j["degraded"].push_back({{"id", d.id}, {"path", d.path}});
  j["labels"] = json::array();
  for (const auto& l : labels) j["labels"].push_back(vrestore::to_json(l));
  return j;
}

DatasetManifest DatasetManifest::from_json(const json& j) {
  try {
    DatasetManifest m;
    m.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("recipe")) m.recipe = DatasetRecipe::from_json(j["recipe"]);
    for (const auto& g : j.at("gt"))
      m.gt.push_back({g.at("id"), g.value("path", ""), g.at("width"), g.at("height"), g.at("fps"), g.at("frames")});
    for (const auto& d : j.value("degraded", json::array())) m.degraded.push_back({d.at("id"), d.value("path", "")});
    for (const auto& l : j.at("labels")) m.labels.push_back(label_from_json(l));
    return m;
  } catch (const json::exception& e) {
    throw InvalidFormat(std::string("malformed dataset manifest: ") + e.what());
  }
}

namespace {

Severity draw_severity(std::mt19937_64& rng) {
  return static_cast<Severity>(1 + std::uniform_int_distribution<int>(0, 2)(rng));
}

DegradationSpec draw_spec(DegradationKind kind, std::mt19937_64& rng, const Clip& gt) {
  Severity sev = draw_severity(rng);
  DegradationSpec spec = make_spec(kind, sev, rng());
  const bool alt = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
  if (auto* n = std::get_if<NoiseParams>(&spec.params); n && alt) n->model = NoiseModel::Poisson;
  if (auto* b = std::get_if<BlurParams>(&spec.params); b && alt) b->model = BlurModel::Disc;
  // Short clips cannot drop every k-th frame for large k; step severity down.
  while (kind == DegradationKind::LowFps && std::size_t(std::get<LowFpsParams>(spec.params).step) >= gt.size() &&
         spec.severity != Severity::Low) {
    spec.severity = static_cast<Severity>(level(spec.severity) - 1);
    spec.params = default_params(kind, spec.severity);
  }
  return spec;
}

}  // namespace

std::vector<GeneratedClip> synthesize(const std::vector<Clip>& gt_clips, const DatasetRecipe& recipe,
                                      std::uint64_t master_seed) {
  if (gt_clips.empty()) throw InvalidArgument("dataset generation needs at least one ground-truth clip");
  for (int c : recipe.per_arity)
    if (c < 0) throw InvalidArgument("recipe counts must be non-negative");
  if (recipe.per_arity[0] + recipe.per_arity[1] + recipe.per_arity[2] == 0)
    throw InvalidArgument("recipe requests no clips");

  struct Job {
    std::size_t gt;
    std::vector<DegradationSpec> specs;
    std::string id;
  };
  std::vector<Job> jobs;
  for (std::size_t g = 0; g < gt_clips.size(); ++g) {
    const Clip& gt = gt_clips[g];
    KindList usable(kAllKinds.begin(), kAllKinds.end());
    if (gt.size() <= 2) usable.erase(std::remove(usable.begin(), usable.end(), DegradationKind::LowFps), usable.end());
    std::size_t item = 0;
    for (int arity = 1; arity <= 3; ++arity) {
      for (int i = 0; i < recipe.per_arity[arity - 1]; ++i, ++item) {
        std::mt19937_64 rng(mix_seed(mix_seed(master_seed, g), item));
        KindList kinds;
        if (arity == 1) {
          kinds = {usable[std::size_t(i) % usable.size()]};
        } else {
          KindList pool = usable;
          std::shuffle(pool.begin(), pool.end(), rng);
          kinds.assign(pool.begin(), pool.begin() + arity);
        }
        Job job{g, {}, gt.id() + "_m" + std::to_string(arity) + "_" + std::to_string(i)};
        for (auto k : kinds) job.specs.push_back(draw_spec(k, rng, gt));
        jobs.push_back(std::move(job));
      }
    }
  }
  std::vector<GeneratedClip> out(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    auto [clip, label] = compose_mixed(gt_clips[jobs[i].gt], jobs[i].specs, jobs[i].id);
    out[i] = GeneratedClip{std::move(clip), std::move(label)};
  });
  return out;
}

DatasetManifest generate_dataset(const std::vector<Clip>& gt_clips, const DatasetRecipe& recipe,
                                 std::uint64_t master_seed, const fs::path& out_dir) {
  auto items = synthesize(gt_clips, recipe, master_seed);
  DatasetManifest m;
  m.seed = master_seed;
  m.recipe = recipe;
  m.root = out_dir;
  for (const auto& gt : gt_clips) {
    const std::string rel = "gt/" + gt.id();
    save_clip(gt, out_dir / rel);
    m.gt.push_back({gt.id(), rel, gt.width(), gt.height(), gt.fps(), gt.size()});
  }
  for (auto& item : items) {
    const std::string rel = "clips/" + item.clip.id();
    save_clip(item.clip, out_dir / rel);
    m.degraded.push_back({item.clip.id(), rel});
    m.labels.push_back(std::move(item.label));
  }
  save_manifest(m, out_dir / "dataset.json");
  return m;
}

void save_manifest(const DatasetManifest& m, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError(IoError::Code::WriteFailed, "cannot write " + file.string());
  out << m.to_json().dump(2) << '\n';
}

DatasetManifest load_manifest(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError(IoError::Code::NotFound, "cannot open dataset manifest " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidFormat("unparseable dataset manifest " + file.string() + ": " + e.what());
  }
  DatasetManifest m = DatasetManifest::from_json(j);
  m.root = file.parent_path();
  return m;
}

}  // namespace vrestore
