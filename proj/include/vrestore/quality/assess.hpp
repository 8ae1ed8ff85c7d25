#pragma once

#include <array>
#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vrestore/context.hpp"
#include "vrestore/degrade/kinds.hpp"
#include "vrestore/identify/profile.hpp"

namespace vrestore {

struct QualityReport {
  std::optional<double> psnr_db;
  std::optional<double> ssim;
  double nr_score = 0.0;
  std::vector<double> psnr_per_frame;
  std::vector<double> ssim_per_frame;
};

using NrWeights = std::array<double, kKindCount>;
inline constexpr NrWeights kDefaultNrWeights = {8, 8, 8, 8, 8, 8, 8, 8};

// 100 - sum_k w_k * continuous severity of detector score k, clamped to
// [0, 100]. Higher is better.
double assess_nr(const Clip& clip, const NominalFormat& nominal, const ThresholdTable& table = {},
                 const NrWeights& weights = kDefaultNrWeights);

// Full-reference fields are filled when a reference is given; the test clip
// is aligned to it first (align_to_reference).
QualityReport assess(const Clip& clip, const Clip* reference, const NominalFormat& nominal,
                     const ThresholdTable& table = {}, const NrWeights& weights = kDefaultNrWeights);

enum class AssessorKind { NoReference, Psnr, External };

std::string_view to_string(AssessorKind k);
// Accepts "nr", "psnr", "external".
AssessorKind parse_assessor_kind(std::string_view name);

struct AssessContext {
  NominalFormat nominal;
  const Clip* reference = nullptr;
  // Subtask that produced the candidate; advisory only.
  std::optional<DegradationKind> subtask;
};

// Scores candidates for SelectBest; higher is better.
class Assessor {
 public:
  virtual ~Assessor() = default;
  virtual AssessorKind kind() const = 0;
  virtual double score(const Clip& clip, const AssessContext& ctx) = 0;
};

class NrAssessor : public Assessor {
 public:
  explicit NrAssessor(ThresholdTable table = {}, NrWeights weights = kDefaultNrWeights)
      : table_(table), weights_(weights) {}
  AssessorKind kind() const override { return AssessorKind::NoReference; }
  double score(const Clip& clip, const AssessContext& ctx) override;

 private:
  ThresholdTable table_;
  NrWeights weights_;
};

// PSNR against the context's reference (evaluation mode). Throws
// ConfigurationError when no reference is supplied.
class PsnrAssessor : public Assessor {
 public:
  AssessorKind kind() const override { return AssessorKind::Psnr; }
  double score(const Clip& clip, const AssessContext& ctx) override;
};

// POST /assess {"manifest": path, "frames": [...], "subtask": kind|null}
// -> {"score": number}. Failures raise ServiceUnavailable.
class ExternalAssessor : public Assessor {
 public:
  ExternalAssessor(std::string base_url, std::filesystem::path scratch_dir,
                   std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));
  AssessorKind kind() const override { return AssessorKind::External; }
  double score(const Clip& clip, const AssessContext& ctx) override;

 private:
  std::string base_url_;
  std::filesystem::path scratch_;
  std::chrono::milliseconds timeout_;
  std::size_t calls_ = 0;
};

}  // namespace vrestore
