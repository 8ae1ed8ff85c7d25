#include "vrestore/router/knowledge.hpp"

#include <algorithm>
#include <fstream>

#include "vrestore/error.hpp"

namespace vrestore {

KindList ExperienceRecord::kinds() const {
  KindList out;
  for (const auto& d : degradations) out.push_back(d.first);
  return out;
}

void validate(const ExperienceRecord& r) {
  const KindList set = r.kinds();
  for (std::size_t i = 0; i < r.sequence.size(); ++i) {
    if (std::find(set.begin(), set.end(), r.sequence[i]) == set.end())
      throw InvalidArgument("experience sequence step outside its degradation set");
    if (std::find(r.sequence.begin(), r.sequence.begin() + i, r.sequence[i]) != r.sequence.begin() + i)
      throw InvalidArgument("experience sequence repeats a kind");
  }
  if (!r.tools.empty() && r.tools.size() != r.sequence.size())
    throw InvalidArgument("experience tools must match sequence steps");
}

void KnowledgeBase::record(ExperienceRecord r) {
  validate(r);
  auto it = std::find_if(records_.begin(), records_.end(), [&](const ExperienceRecord& e) { return e.id == r.id; });
  if (it != records_.end())
    *it = std::move(r);
  else
    records_.push_back(std::move(r));
}

void KnowledgeBase::consolidate() {
  struct Tally {
    std::size_t trials = 0, successes = 0;
    double score_sum = 0.0;
  };
  std::map<std::string, std::map<KindList, Tally>> groups;
  for (const auto& r : records_) {
    auto& t = groups[kind_set_key(r.kinds())][r.sequence];
    ++t.trials;
    t.successes += r.success ? 1 : 0;
    t.score_sum += r.score;
  }
  rules_.clear();
  for (const auto& [key, seqs] : groups) {
    std::vector<RoutingRule> ranked;
    for (const auto& [seq, t] : seqs) ranked.push_back({seq, t.trials, t.successes, t.score_sum / double(t.trials)});
    std::sort(ranked.begin(), ranked.end(), [](const RoutingRule& a, const RoutingRule& b) {
      // Cross-multiplied success rates avoid rounding ties.
      const auto lhs = a.successes * b.trials, rhs = b.successes * a.trials;
      if (lhs != rhs) return lhs > rhs;
      if (a.mean_score != b.mean_score) return a.mean_score > b.mean_score;
      return a.sequence < b.sequence;
    });
    rules_[key] = std::move(ranked);
  }
}

void KnowledgeBase::merge(const KnowledgeBase& other) {
  for (const auto& r : other.records_) record(r);
  consolidate();
}

const std::vector<RoutingRule>* KnowledgeBase::rules_for(const KindList& kinds) const {
  auto it = rules_.find(kind_set_key(kinds));
  return it == rules_.end() ? nullptr : &it->second;
}

std::optional<KindList> KnowledgeBase::top_sequence(const KindList& kinds) const {
  const auto* rules = rules_for(kinds);
  if (!rules) return std::nullopt;
  for (const auto& rule : *rules)
    if (rule.sequence.size() == kinds.size()) return rule.sequence;
  return std::nullopt;
}

nlohmann::json kinds_to_json(const KindList& kinds) {
  nlohmann::json j = nlohmann::json::array();
  for (auto k : kinds) j.push_back(std::string(to_string(k)));
  return j;
}

KindList kinds_from_json(const nlohmann::json& j) {
  KindList out;
  for (const auto& v : j) out.push_back(parse_kind(v.get<std::string>()));
  return out;
}

nlohmann::json KnowledgeBase::to_json() const {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records_) {
    nlohmann::json degr = nlohmann::json::array();
    for (const auto& [k, s] : r.degradations)
      degr.push_back({{"kind", std::string(to_string(k))}, {"severity", std::string(to_string(s))}});
    recs.push_back({{"id", r.id},
                    {"degradations", degr},
                    {"sequence", kinds_to_json(r.sequence)},
                    {"tools", r.tools},
                    {"success", r.success},
                    {"score", r.score},
                    {"timestamp", r.timestamp}});
  }
  nlohmann::json rules = nlohmann::json::object();
  for (const auto& [key, list] : rules_) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& rule : list)
      arr.push_back({{"sequence", kinds_to_json(rule.sequence)},
                     {"trials", rule.trials},
                     {"successes", rule.successes},
                     {"mean_score", rule.mean_score}});
    rules[key] = arr;
  }
  return {{"records", recs}, {"rules", rules}};
}

KnowledgeBase KnowledgeBase::from_json(const nlohmann::json& j) {
  KnowledgeBase kb;
  try {
    for (const auto& r : j.value("records", nlohmann::json::array())) {
      ExperienceRecord rec;
      rec.id = r.at("id").get<std::string>();
      for (const auto& d : r.at("degradations"))
        rec.degradations.emplace_back(parse_kind(d.at("kind").get<std::string>()),
                                      parse_severity(d.at("severity").get<std::string>()));
      rec.sequence = kinds_from_json(r.at("sequence"));
      rec.tools = r.value("tools", std::vector<std::string>{});
      rec.success = r.at("success").get<bool>();
      rec.score = r.value("score", 0.0);
      rec.timestamp = r.value("timestamp", std::int64_t{0});
      validate(rec);
      kb.records_.push_back(std::move(rec));
    }
    const nlohmann::json rules = j.value("rules", nlohmann::json::object());
    for (const auto& [key, arr] : rules.items()) {
      std::vector<RoutingRule> list;
      for (const auto& r : arr)
        list.push_back({kinds_from_json(r.at("sequence")), r.at("trials").get<std::size_t>(),
                        r.at("successes").get<std::size_t>(), r.at("mean_score").get<double>()});
      kb.rules_[kind_set_key(parse_kind_set_key(key))] = std::move(list);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidFormat(std::string("bad knowledge base: ") + e.what());
  }
  return kb;
}

KnowledgeBase KnowledgeBase::load(const std::filesystem::path& file) {
  if (!std::filesystem::exists(file)) return {};
  std::ifstream in(file);
  if (!in) throw IoError(IoError::Code::NotFound, "cannot open " + file.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidFormat(file.string() + ": " + e.what());
  }
}

void KnowledgeBase::save(const std::filesystem::path& file) const {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  {
    std::ofstream out(tmp);
    out << to_json().dump(2) << '\n';
    if (!out) throw IoError(IoError::Code::WriteFailed, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

}  // namespace vrestore
