#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vrestore/degrade/degrade.hpp"

namespace vrestore {

// Degraded clips to emit per ground-truth clip, by arity (1, 2, 3 kinds).
struct DatasetRecipe {
  std::array<int, 3> per_arity{8, 4, 2};

  static DatasetRecipe from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct GtEntry {
  std::string id;
  std::string path;  // relative to the manifest directory
  int width = 0;
  int height = 0;
  double fps = 0.0;
  std::size_t frames = 0;
};

struct DegradedEntry {
  std::string id;
  std::string path;
};

struct DatasetManifest {
  std::uint64_t seed = 0;
  DatasetRecipe recipe;
  std::vector<GtEntry> gt;
  std::vector<DegradedEntry> degraded;
  std::vector<GroundTruthLabel> labels;
  std::filesystem::path root;  // directory holding dataset.json; not serialized

  const GroundTruthLabel* find_label(const std::string& clip_id) const;
  const GtEntry* find_gt(const std::string& gt_id) const;

  nlohmann::json to_json() const;
  static DatasetManifest from_json(const nlohmann::json& j);
};

struct GeneratedClip {
  Clip clip;
  GroundTruthLabel label;
};

// Deterministic in-memory synthesis: kinds for singles cycle through all
// eight kinds; mixed kinds, severities and noise/blur variants are drawn from
// a generator derived from (master_seed, gt index, item index).
std::vector<GeneratedClip> synthesize(const std::vector<Clip>& gt_clips, const DatasetRecipe& recipe,
                                      std::uint64_t master_seed);

// synthesize() plus writing gt/<id>/, clips/<id>/ and dataset.json under out_dir.
DatasetManifest generate_dataset(const std::vector<Clip>& gt_clips, const DatasetRecipe& recipe,
                                 std::uint64_t master_seed, const std::filesystem::path& out_dir);

void save_manifest(const DatasetManifest& m, const std::filesystem::path& file);
DatasetManifest load_manifest(const std::filesystem::path& file);

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace vrestore
