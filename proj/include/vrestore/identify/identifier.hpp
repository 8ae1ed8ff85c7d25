#pragma once

#include <array>
#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "vrestore/context.hpp"
#include "vrestore/identify/profile.hpp"

namespace vrestore {

enum class IdentifierKind { Oracle, Heuristic, External };

std::string_view to_string(IdentifierKind k);
IdentifierKind parse_identifier_kind(std::string_view name);

struct IdentifyContext {
  NominalFormat nominal;
  // Pristine reference, when known (evaluation runs). Never required.
  const Clip* reference = nullptr;
};

class Identifier {
 public:
  explicit Identifier(Severity success_threshold) : success_threshold_(success_threshold) {}
  virtual ~Identifier() = default;

  virtual IdentifierKind kind() const = 0;
  // Throws InvalidArgument on an empty clip.
  virtual DegradationProfile identify(const Clip& clip, const IdentifyContext& ctx) = 0;

  // True iff identify(clip).severity[k] is at or below the success threshold.
  bool check_removed(const Clip& clip, DegradationKind k, const IdentifyContext& ctx);

  Severity success_threshold() const { return success_threshold_; }
  void set_success_threshold(Severity s) { success_threshold_ = s; }

  // Notifications from the restoration loop. A subtask for k turned `before`
  // into `after`; a rollback undid the completed subtask for k. Stateless
  // identifiers ignore both.
  virtual void observe_step(DegradationKind, const Clip& /*before*/, const Clip& /*after*/,
                            const IdentifyContext&) {}
  virtual void undo_step(DegradationKind) {}
  // Start of a restoration run; drops per-run state.
  virtual void reset() {}

 private:
  Severity success_threshold_;
};

// Reads the ground-truth label and tracks which kinds the loop removed.
// With reference verification on, a subtask for k only counts as a removal
// when its output is at least as close (PSNR) as its input to the reference
// re-degraded with the label's specs for the kinds still outstanding after k.
class OracleIdentifier : public Identifier {
 public:
  explicit OracleIdentifier(GroundTruthLabel label, bool verify_with_reference = false);

  IdentifierKind kind() const override { return IdentifierKind::Oracle; }
  DegradationProfile identify(const Clip& clip, const IdentifyContext& ctx) override;
  void observe_step(DegradationKind k, const Clip& before, const Clip& after, const IdentifyContext& ctx) override;
  void undo_step(DegradationKind k) override { unmark_removed(k); }
  void reset() override { removed_ = {}; }

  void mark_removed(DegradationKind k) { removed_[index_of(k)] = true; }
  void unmark_removed(DegradationKind k) { removed_[index_of(k)] = false; }
  bool removed(DegradationKind k) const { return removed_[index_of(k)]; }
  const GroundTruthLabel& label() const { return label_; }

 private:
  GroundTruthLabel label_;
  bool verify_;
  std::array<bool, kKindCount> removed_{};
};

class HeuristicIdentifier : public Identifier {
 public:
  explicit HeuristicIdentifier(ThresholdTable table = {});

  IdentifierKind kind() const override { return IdentifierKind::Heuristic; }
  DegradationProfile identify(const Clip& clip, const IdentifyContext& ctx) override;
  const ThresholdTable& table() const { return table_; }

 private:
  ThresholdTable table_;
};

// Delegates to a local HTTP service. The clip is written under scratch_dir
// so the service can read its frames; request and reply:
//   POST /identify {"manifest": path, "frames": [paths...]}
//   -> {"severity": {kind: level, ...}}
// Failures raise ServiceUnavailable.
class ExternalIdentifier : public Identifier {
 public:
  ExternalIdentifier(std::string base_url, std::filesystem::path scratch_dir,
                     std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));

  IdentifierKind kind() const override { return IdentifierKind::External; }
  DegradationProfile identify(const Clip& clip, const IdentifyContext& ctx) override;

 private:
  std::string base_url_;
  std::filesystem::path scratch_;
  std::chrono::milliseconds timeout_;
  std::size_t calls_ = 0;
};

}  // namespace vrestore
