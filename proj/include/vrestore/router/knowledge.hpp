#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vrestore/degrade/kinds.hpp"

namespace vrestore {

struct ExperienceRecord {
  std::string id;
  std::vector<std::pair<DegradationKind, Severity>> degradations;
  KindList sequence;
  std::vector<std::string> tools;  // one per sequence step
  bool success = false;
  double score = 0.0;
  std::int64_t timestamp = 0;

  KindList kinds() const;
  bool operator==(const ExperienceRecord&) const = default;
};

// Throws InvalidArgument unless the sequence is a duplicate-free subset of
// the degradation set and tools line up with it.
void validate(const ExperienceRecord& r);

struct RoutingRule {
  KindList sequence;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double mean_score = 0.0;

  double success_rate() const { return trials ? double(successes) / double(trials) : 0.0; }
  bool operator==(const RoutingRule&) const = default;
};

class KnowledgeBase {
 public:
  // Replaces an existing record with the same id (last writer wins).
  void record(ExperienceRecord r);
  // Rebuilds rules from records: per kind set, sequences ranked by success
  // rate, then mean score, then canonical lexicographic order.
  void consolidate();
  void merge(const KnowledgeBase& other);

  const std::vector<ExperienceRecord>& records() const { return records_; }
  const std::map<std::string, std::vector<RoutingRule>>& rules() const { return rules_; }
  const std::vector<RoutingRule>* rules_for(const KindList& kinds) const;
  // Highest-ranked sequence covering exactly these kinds.
  std::optional<KindList> top_sequence(const KindList& kinds) const;
  bool empty() const { return records_.empty() && rules_.empty(); }

  nlohmann::json to_json() const;
  static KnowledgeBase from_json(const nlohmann::json& j);
  // A missing file loads as an empty knowledge base.
  static KnowledgeBase load(const std::filesystem::path& file);
  // Writes through a temporary file and rename.
  void save(const std::filesystem::path& file) const;

  bool operator==(const KnowledgeBase&) const = default;

 private:
  std::vector<ExperienceRecord> records_;
  std::map<std::string, std::vector<RoutingRule>> rules_;
};

nlohmann::json kinds_to_json(const KindList& kinds);
KindList kinds_from_json(const nlohmann::json& j);

}  // namespace vrestore
