#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vrestore {

struct Rating {
  std::string subject;
  std::string video;
  double score = 0.0;
};

// Subject x video grid; subjects and videos keep first-appearance order.
class RatingMatrix {
 public:
  RatingMatrix() = default;
  // Throws DataError on a repeated (subject, video) pair.
  explicit RatingMatrix(const std::vector<Rating>& ratings);

  const std::vector<std::string>& subjects() const { return subjects_; }
  const std::vector<std::string>& videos() const { return videos_; }
  const std::optional<double>& at(std::size_t subject, std::size_t video) const {
    return cells_[subject * videos_.size() + video];
  }
  std::vector<Rating> ratings() const;

  // Copy without the listed subjects; videos are kept even if unrated.
  RatingMatrix without_subjects(const std::vector<std::string>& drop) const;

  bool operator==(const RatingMatrix&) const = default;

 private:
  std::vector<std::string> subjects_;
  std::vector<std::string> videos_;
  std::vector<std::optional<double>> cells_;
};

struct ScreeningResult {
  RatingMatrix matrix;
  std::vector<std::string> rejected;  // in subject order
};

inline constexpr double kRejectFraction = 0.03;

// Kurtosis-based screening: per video, ratings outside mean +- 2 sd (when
// the video's kurtosis lies in [2, 4]) or mean +- sqrt(20) sd (otherwise)
// are flagged; subjects with a flagged fraction above 3% are removed. Passes
// repeat until none is removed, so a second call removes nobody. Stops early
// rather than leave fewer than 5 subjects. Throws InsufficientData for fewer
// than 5 subjects on input.
ScreeningResult reject_outliers(const RatingMatrix& matrix);

struct MosEntry {
  std::string video;
  double mos = 0.0;
  std::size_t n_raters = 0;
  bool low_raters = false;  // fewer than 3 raters
};

// Per-subject z-scores (subject mean and sample standard deviation over the
// subject's own ratings), rescaled by 100(z + 3)/6, averaged per video and
// clamped to [0, 100]. Throws DegenerateRater for a subject with zero
// spread or fewer than two ratings.
std::vector<MosEntry> compute_mos(const RatingMatrix& matrix);

// CSV with header subject,video,score; '#' lines are skipped.
std::vector<Rating> read_ratings_csv(std::istream& in);
std::vector<Rating> read_ratings_csv(const std::filesystem::path& file);

// Comment line "# vrestore <version>, seed <seed>", header video,mos,n_raters.
void write_mos_csv(std::ostream& out, const std::vector<MosEntry>& entries, std::uint64_t seed = 0);

// First line of every CSV the tools emit.
std::string csv_provenance(std::uint64_t seed);

}  // namespace vrestore
