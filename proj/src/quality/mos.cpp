#include "vrestore/quality/mos.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "vrestore/error.hpp"
#include "vrestore/version.hpp"

namespace vrestore {

RatingMatrix::RatingMatrix(const std::vector<Rating>& ratings) {
  std::unordered_map<std::string, std::size_t> s_index, v_index;
  for (const auto& r : ratings) {
    if (s_index.emplace(r.subject, subjects_.size()).second) subjects_.push_back(r.subject);
    if (v_index.emplace(r.video, videos_.size()).second) videos_.push_back(r.video);
  }
  cells_.assign(subjects_.size() * videos_.size(), std::nullopt);
  for (const auto& r : ratings) {
    auto& cell = cells_[s_index[r.subject] * videos_.size() + v_index[r.video]];
    if (cell) throw DataError("duplicate rating for subject " + r.subject + ", video " + r.video);
    cell = r.score;
  }
}

std::vector<Rating> RatingMatrix::ratings() const {
  std::vector<Rating> out;
  for (std::size_t s = 0; s < subjects_.size(); ++s)
    for (std::size_t v = 0; v < videos_.size(); ++v)
      if (const auto& c = at(s, v)) out.push_back({subjects_[s], videos_[v], *c});
  return out;
}

RatingMatrix RatingMatrix::without_subjects(const std::vector<std::string>& drop) const {
  RatingMatrix m;
  m.videos_ = videos_;
  for (std::size_t s = 0; s < subjects_.size(); ++s) {
    if (std::find(drop.begin(), drop.end(), subjects_[s]) != drop.end()) continue;
    m.subjects_.push_back(subjects_[s]);
    for (std::size_t v = 0; v < videos_.size(); ++v) m.cells_.push_back(at(s, v));
  }
  return m;
}

namespace {

// One screening pass; returns the subjects to remove.
std::vector<std::string> screen_once(const RatingMatrix& m) {
  const std::size_t ns = m.subjects().size(), nv = m.videos().size();
  std::vector<std::size_t> flagged(ns, 0), rated(ns, 0);
  for (std::size_t v = 0; v < nv; ++v) {
    std::vector<std::pair<std::size_t, double>> col;
    for (std::size_t s = 0; s < ns; ++s)
      if (const auto& c = m.at(s, v)) col.emplace_back(s, *c);
    for (const auto& [s, r] : col) ++rated[s];
    if (col.size() < 2) continue;
    const double n = double(col.size());
    double mean = 0;
    for (const auto& e : col) mean += e.second;
    mean /= n;
    double m2 = 0, m4 = 0;
    for (const auto& e : col) {
      const double d = e.second - mean;
      m2 += d * d;
      m4 += d * d * d * d;
    }
    if (m2 <= 0) continue;  // unanimous video: nobody deviates
    const double sd = std::sqrt(m2 / (n - 1));
    const double kurtosis = (m4 / n) / ((m2 / n) * (m2 / n));
    const double bound = (kurtosis >= 2.0 && kurtosis <= 4.0 ? 2.0 : std::sqrt(20.0)) * sd;
    for (const auto& [s, r] : col)
      if (r > mean + bound || r < mean - bound) ++flagged[s];
  }
  std::vector<std::string> drop;
  for (std::size_t s = 0; s < ns; ++s)
    if (rated[s] > 0 && double(flagged[s]) / double(rated[s]) > kRejectFraction) drop.push_back(m.subjects()[s]);
  return drop;
}

}  // namespace

ScreeningResult reject_outliers(const RatingMatrix& matrix) {
  if (matrix.subjects().size() < 5)
    throw InsufficientData("outlier screening needs at least 5 subjects, got " +
                           std::to_string(matrix.subjects().size()));
  ScreeningResult result{matrix, {}};
  for (;;) {
    const auto drop = screen_once(result.matrix);
    if (drop.empty() || result.matrix.subjects().size() - drop.size() < 5) break;
    result.matrix = result.matrix.without_subjects(drop);
    result.rejected.insert(result.rejected.end(), drop.begin(), drop.end());
  }
  // Report rejections in the input's subject order.
  std::vector<std::string> ordered;
  for (const auto& s : matrix.subjects())
    if (std::find(result.rejected.begin(), result.rejected.end(), s) != result.rejected.end()) ordered.push_back(s);
  result.rejected = std::move(ordered);
  return result;
}

std::vector<MosEntry> compute_mos(const RatingMatrix& m) {
  const std::size_t ns = m.subjects().size(), nv = m.videos().size();
  std::vector<double> mean(ns, 0.0), sd(ns, 0.0);
  for (std::size_t s = 0; s < ns; ++s) {
    std::size_t count = 0;
    for (std::size_t v = 0; v < nv; ++v)
      if (const auto& c = m.at(s, v)) {
        mean[s] += *c;
        ++count;
      }
    if (count < 2) throw DegenerateRater(m.subjects()[s], "subject " + m.subjects()[s] + " has fewer than two ratings");
    mean[s] /= double(count);
    double ss = 0.0;
    for (std::size_t v = 0; v < nv; ++v)
      if (const auto& c = m.at(s, v)) ss += (*c - mean[s]) * (*c - mean[s]);
    sd[s] = std::sqrt(ss / double(count - 1));
    if (sd[s] <= 0.0) throw DegenerateRater(m.subjects()[s], "subject " + m.subjects()[s] + " gives identical ratings");
  }
  std::vector<MosEntry> out;
  for (std::size_t v = 0; v < nv; ++v) {
    MosEntry e{m.videos()[v], 0.0, 0, false};
    double sum = 0.0;
    for (std::size_t s = 0; s < ns; ++s)
      if (const auto& c = m.at(s, v)) {
        const double z = (*c - mean[s]) / sd[s];
        sum += 100.0 * (z + 3.0) / 6.0;
        ++e.n_raters;
      }
    e.mos = e.n_raters ? std::clamp(sum / double(e.n_raters), 0.0, 100.0) : 0.0;
    e.low_raters = e.n_raters < 3;
    out.push_back(e);
  }
  return out;
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

std::vector<Rating> read_ratings_csv(std::istream& in) {
  std::vector<Rating> out;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(trim(f));
    if (!header_seen) {
      if (fields != std::vector<std::string>{"subject", "video", "score"})
        throw InvalidFormat("ratings CSV must start with header subject,video,score");
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) throw InvalidFormat("ratings CSV line " + std::to_string(line_no) + ": expected 3 fields");
    Rating r{fields[0], fields[1], 0.0};
    try {
      std::size_t used = 0;
      r.score = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw InvalidFormat("ratings CSV line " + std::to_string(line_no) + ": bad score '" + fields[2] + "'");
    }
    out.push_back(std::move(r));
  }
  if (!header_seen) throw InvalidFormat("ratings CSV has no header");
  return out;
}

std::vector<Rating> read_ratings_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError(IoError::Code::NotFound, "cannot open " + file.string());
  return read_ratings_csv(in);
}

std::string csv_provenance(std::uint64_t seed) {
  return std::string("# vrestore ") + kVersion + ", seed " + std::to_string(seed);
}

void write_mos_csv(std::ostream& out, const std::vector<MosEntry>& entries, std::uint64_t seed) {
  out << csv_provenance(seed) << "\n";
  out << "video,mos,n_raters\n";
  out << std::setprecision(10);
  for (const auto& e : entries) out << e.video << ',' << e.mos << ',' << e.n_raters << '\n';
}

}  // namespace vrestore
