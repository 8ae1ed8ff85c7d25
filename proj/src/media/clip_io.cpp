#include "vrestore/media/clip_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "vrestore/error.hpp"

namespace vrestore {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint8_t to_byte(float v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.f, 1.f) * 255.f)); }

// Skips whitespace and '#' comments in a PPM header.
bool skip_header_space(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == EOF) return false;
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      return true;
    }
  }
}

std::string frame_name(std::size_t i) {
  std::ostringstream os;
  os << std::setw(6) << std::setfill('0') << i << ".ppm";
  return os.str();
}

}  // namespace

Frame read_ppm(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError(IoError::Code::CorruptFrame, "cannot open frame " + file.string());
  std::string magic;
  in >> magic;
  int w = 0, h = 0, maxval = 0;
  if (magic != "P6" || !skip_header_space(in) || !(in >> w) || !skip_header_space(in) || !(in >> h) ||
      !skip_header_space(in) || !(in >> maxval) || w < 1 || h < 1 || maxval != 255) {
    throw IoError(IoError::Code::CorruptFrame, "bad PPM header in " + file.string());
  }
  in.get();  // single whitespace byte before the raster
  std::vector<unsigned char> raw(std::size_t(w) * h * 3);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    throw IoError(IoError::Code::CorruptFrame, "truncated PPM raster in " + file.string());
  std::vector<float> data(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) data[i] = raw[i] / 255.f;
  return Frame(w, h, std::move(data));
}

void write_ppm(const Frame& frame, const fs::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError(IoError::Code::WriteFailed, "cannot write " + file.string());
  out << "P6\n" << frame.width() << ' ' << frame.height() << "\n255\n";
  std::vector<unsigned char> raw(frame.data().size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = to_byte(frame.data()[i]);
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError(IoError::Code::WriteFailed, "short write to " + file.string());
}

Frame quantize8(const Frame& frame) {
  std::vector<float> data(frame.data().begin(), frame.data().end());
  for (float& v : data) v = to_byte(v) / 255.f;
  return Frame(frame.width(), frame.height(), std::move(data));
}

Clip quantize8(const Clip& clip) {
  std::vector<Frame> frames;
  frames.reserve(clip.size());
  for (const auto& f : clip.frames()) frames.push_back(quantize8(f));
  return Clip(clip.id(), clip.fps(), std::move(frames));
}

Clip load_clip(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw IoError(IoError::Code::MissingManifest, "missing manifest: " + manifest_path.string());
  json m;
  try {
    in >> m;
  } catch (const json::exception& e) {
    throw IoError(IoError::Code::MissingManifest, "unreadable manifest " + manifest_path.string() + ": " + e.what());
  }
  if (!m.contains("frames") || !m["frames"].is_array() || !m.contains("fps"))
    throw IoError(IoError::Code::MissingManifest, "manifest lacks frames/fps: " + manifest_path.string());
  if (m["frames"].empty()) throw IoError(IoError::Code::EmptyClip, "clip has no frames: " + dir.string());
  std::vector<Frame> frames;
  for (const auto& name : m["frames"]) {
    const fs::path f = dir / name.get<std::string>();
    if (!fs::exists(f)) throw IoError(IoError::Code::CorruptFrame, "missing frame file " + f.string());
    frames.push_back(read_ppm(f));
    if (frames.back().width() != frames.front().width() || frames.back().height() != frames.front().height())
      throw IoError(IoError::Code::InconsistentFrames, "frame size differs in " + f.string());
  }
  const std::string id = m.value("id", dir.filename().string());
  return Clip(id, m["fps"].get<double>(), std::move(frames));
}

void save_clip(const Clip& clip, const fs::path& dir) {
  if (clip.empty()) throw IoError(IoError::Code::EmptyClip, "refusing to save an empty clip");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(IoError::Code::WriteFailed, "cannot create " + dir.string() + ": " + ec.message());
  // Stale frames from a previous, longer clip would otherwise linger.
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".ppm") fs::remove(entry.path());
  }
  json m;
  m["id"] = clip.id();
  m["fps"] = clip.fps();
  m["frames"] = json::array();
  for (std::size_t i = 0; i < clip.size(); ++i) {
    const std::string name = frame_name(i);
    write_ppm(clip[i], dir / name);
    m["frames"].push_back(name);
  }
  std::ofstream out(dir / "manifest.json");
  out << m.dump(2) << '\n';
  if (!out) throw IoError(IoError::Code::WriteFailed, "cannot write manifest in " + dir.string());
}

}  // namespace vrestore
