#include "tqd/stimulus.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "tqd/image_ops.h"
#include "tqd/kernels.h"

namespace tqd {

namespace fs = std::filesystem;

namespace {

// Deterministic, platform-independent generator; std:: distributions are
// implementation-defined and would break bit-identical sequences.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  Scalar NextUnit() { return (Next() >> 11) * 0x1.0p-53; }

  int NextInt(int lo, int hi) {
    return lo + static_cast<int>(Next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

Image RescaleTo(const Image& in, Scalar lo, Scalar hi) {
  const Scalar m = in.minCoeff();
  const Scalar M = in.maxCoeff();
  if (M <= m) return Image::Constant(in.rows(), in.cols(), 0.5 * (lo + hi));
  return lo + (in - m) * ((hi - lo) / (M - m));
}

Image BuildClutter(int rows, int cols, SplitMix64& rng) {
  Image noise(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) noise(r, c) = rng.NextUnit();
  }
  const SpatialKernel blur = MakeGaussianKernel(1.2, 5);
  return ConvolveSame(noise, blur, Boundary::kToroidal);
}

Image BuildBlocks(int rows, int cols, SplitMix64& rng) {
  Image tex = Image::Constant(rows, cols, 0.5);
  const int count = std::max(16, rows * cols / 900);
  for (int i = 0; i < count; ++i) {
    const int r0 = rng.NextInt(0, rows - 1);
    const int c0 = rng.NextInt(0, cols - 1);
    const int h = rng.NextInt(6, 36);
    const int w = rng.NextInt(6, 36);
    const Scalar v = rng.NextUnit();
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        tex((r0 + r) % rows, (c0 + c) % cols) = v;
      }
    }
  }
  return tex;
}

Image BuildStripes(int rows, int cols, SplitMix64& rng) {
  // Crossed horizontal and vertical bands, so every cardinal motion
  // produces luminance change.
  std::vector<Scalar> col_bands(cols), row_bands(rows);
  for (int c = 0; c < cols;) {
    const int len = rng.NextInt(6, 24);
    const Scalar v = rng.NextUnit();
    for (int k = 0; k < len && c < cols; ++k, ++c) col_bands[c] = v;
  }
  for (int r = 0; r < rows;) {
    const int len = rng.NextInt(6, 24);
    const Scalar v = rng.NextUnit();
    for (int k = 0; k < len && r < rows; ++k, ++r) row_bands[r] = v;
  }
  Image tex(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      tex(r, c) = 0.5 * (row_bands[r] + col_bands[c]);
    }
  }
  return tex;
}

Image BuildTexture(const StimulusSpec& spec) {
  SplitMix64 rng(spec.seed ^ (0x100ull + static_cast<int>(spec.texture)));
  Image tex;
  switch (spec.texture) {
    case TextureKind::kClutter:
      tex = BuildClutter(spec.height, spec.width, rng);
      break;
    case TextureKind::kBlocks:
      tex = BuildBlocks(spec.height, spec.width, rng);
      break;
    case TextureKind::kStripes:
      tex = BuildStripes(spec.height, spec.width, rng);
      break;
  }
  return RescaleTo(tex, spec.lum_lo, spec.lum_hi);
}

inline int WrapIndex(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

Scalar SampleWrapped(const Image& tex, Scalar y, Scalar x) {
  const int rows = static_cast<int>(tex.rows());
  const int cols = static_cast<int>(tex.cols());
  const Scalar fy = std::floor(y);
  const Scalar fx = std::floor(x);
  const Scalar wy = y - fy;
  const Scalar wx = x - fx;
  const int r0 = WrapIndex(static_cast<int>(fy), rows);
  const int c0 = WrapIndex(static_cast<int>(fx), cols);
  const int r1 = WrapIndex(r0 + 1, rows);
  const int c1 = WrapIndex(c0 + 1, cols);
  return (1 - wy) * ((1 - wx) * tex(r0, c0) + wx * tex(r0, c1)) +
         wy * ((1 - wx) * tex(r1, c0) + wx * tex(r1, c1));
}

std::string FormatScalarFull(Scalar v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string TextureName(TextureKind kind) {
  switch (kind) {
    case TextureKind::kClutter: return "clutter";
    case TextureKind::kBlocks: return "blocks";
    case TextureKind::kStripes: return "stripes";
  }
  throw InvalidParameterError("invalid texture kind");
}

TextureKind TextureFromName(const std::string& name) {
  if (name == "clutter" || name == "clutter-noise") return TextureKind::kClutter;
  if (name == "blocks") return TextureKind::kBlocks;
  if (name == "stripes") return TextureKind::kStripes;
  throw InvalidParameterError("unknown texture '" + name +
                              "' (expected clutter, blocks or stripes)");
}

void StimulusSpec::Validate() const {
  if (width < 1 || height < 1) {
    throw InvalidParameterError("stimulus: frame size must be at least 1x1");
  }
  if (frame_count < 1) {
    throw InvalidParameterError("stimulus: frame count must be >= 1");
  }
  if (!(sample_rate > 0)) {
    throw InvalidParameterError("stimulus: sample rate must be > 0");
  }
  if (velocity < 0) {
    throw InvalidParameterError("stimulus: velocity must be >= 0");
  }
  if (!(0.0 <= lum_lo && lum_lo < lum_hi && lum_hi <= 1.0)) {
    throw InvalidParameterError(
        "stimulus: luminance range must satisfy 0 <= lo < hi <= 1");
  }
}

StimulusGenerator::StimulusGenerator(const StimulusSpec& spec) : spec_(spec) {
  spec_.Validate();
  texture_ = BuildTexture(spec_);
}

Image StimulusGenerator::Frame(int index) const {
  if (index < 0 || index >= spec_.frame_count) {
    throw InvalidParameterError("stimulus: frame index out of range");
  }
  const Scalar shift = spec_.velocity * index / spec_.sample_rate;
  Scalar dy = 0, dx = 0;
  switch (spec_.direction) {
    case Direction::kRight: dx = -shift; break;
    case Direction::kUp: dy = shift; break;
    case Direction::kLeft: dx = shift; break;
    case Direction::kDown: dy = -shift; break;
  }
  Image out(spec_.height, spec_.width);
  for (int r = 0; r < spec_.height; ++r) {
    for (int c = 0; c < spec_.width; ++c) {
      const Scalar v = SampleWrapped(texture_, r + dy, c + dx);
      out(r, c) = std::clamp(v, spec_.lum_lo, spec_.lum_hi);
    }
  }
  return out;
}

SequenceManifest SequenceManifest::FromSpec(const StimulusSpec& spec) {
  SequenceManifest m;
  m.width = spec.width;
  m.height = spec.height;
  m.frames = spec.frame_count;
  m.sample_rate_hz = spec.sample_rate;
  m.direction = spec.direction;
  m.velocity_px_s = spec.velocity;
  m.texture = TextureName(spec.texture);
  m.seed = spec.seed;
  m.lum_lo = spec.lum_lo;
  m.lum_hi = spec.lum_hi;
  return m;
}

void WriteManifest(const std::string& path, const SequenceManifest& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest '" + path + "'");
  out << "width=" << m.width << "\n";
  out << "height=" << m.height << "\n";
  out << "frames=" << m.frames << "\n";
  out << "sample_rate_hz=" << FormatScalarFull(m.sample_rate_hz) << "\n";
  out << "direction_rad=" << FormatScalarFull(ThetaRadians(m.direction))
      << "\n";
  out << "velocity_px_s=" << FormatScalarFull(m.velocity_px_s) << "\n";
  out << "texture=" << m.texture << "\n";
  out << "seed=" << m.seed << "\n";
  out << "lum_lo=" << FormatScalarFull(m.lum_lo) << "\n";
  out << "lum_hi=" << FormatScalarFull(m.lum_hi) << "\n";
  if (!out) throw IoError("failed writing manifest '" + path + "'");
}

SequenceManifest ReadManifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open manifest '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("manifest '" + path + "' line " +
                        std::to_string(line_no) + ": expected key=value");
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto require = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) {
      throw FormatError("manifest '" + path + "': missing key '" + key + "'");
    }
    return it->second;
  };
  auto to_scalar = [&](const std::string& key) {
    const std::string& s = require(key);
    try {
      size_t pos = 0;
      const Scalar v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw FormatError("manifest '" + path + "': bad numeric value for '" +
                        key + "'");
    }
  };
  SequenceManifest m;
  m.width = static_cast<int>(to_scalar("width"));
  m.height = static_cast<int>(to_scalar("height"));
  m.frames = static_cast<int>(to_scalar("frames"));
  m.sample_rate_hz = to_scalar("sample_rate_hz");
  m.direction = DirectionFromRadians(to_scalar("direction_rad"));
  m.velocity_px_s = to_scalar("velocity_px_s");
  m.texture = require("texture");
  m.seed = std::stoull(require("seed"));
  if (kv.count("lum_lo")) m.lum_lo = to_scalar("lum_lo");
  if (kv.count("lum_hi")) m.lum_hi = to_scalar("lum_hi");
  if (m.width < 1 || m.height < 1 || m.frames < 1 || m.sample_rate_hz <= 0) {
    throw FormatError("manifest '" + path + "': invalid geometry");
  }
  return m;
}

void WritePgm16(const std::string& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write frame '" + path + "'");
  const int rows = static_cast<int>(img.rows());
  const int cols = static_cast<int>(img.cols());
  out << "P5\n" << cols << " " << rows << "\n65535\n";
  std::vector<unsigned char> buf(static_cast<size_t>(rows) * cols * 2);
  size_t i = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Scalar v = std::clamp(img(r, c), 0.0, 1.0);
      const auto q = static_cast<unsigned>(std::lround(v * 65535.0));
      buf[i++] = static_cast<unsigned char>(q >> 8);
      buf[i++] = static_cast<unsigned char>(q & 0xFF);
    }
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("failed writing frame '" + path + "'");
}

namespace {

int NextPnmValue(std::istream& in, const std::string& path) {
  // Skips whitespace and '#' comments per the PNM grammar.
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (!std::isspace(ch)) {
      break;
    }
    ch = in.get();
  }
  if (ch == EOF || !std::isdigit(ch)) {
    throw FormatError("frame '" + path + "': malformed PGM header");
  }
  int value = 0;
  while (ch != EOF && std::isdigit(ch)) {
    value = value * 10 + (ch - '0');
    ch = in.get();
  }
  if (ch != EOF) in.unget();
  return value;
}

}  // namespace

Image ReadPgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open frame '" + path + "'");
  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (m0 != 'P' || m1 != '5') {
    throw FormatError("frame '" + path + "': not a binary PGM (P5)");
  }
  const int cols = NextPnmValue(in, path);
  const int rows = NextPnmValue(in, path);
  const int maxval = NextPnmValue(in, path);
  if (cols < 1 || rows < 1 || maxval < 1 || maxval > 65535) {
    throw FormatError("frame '" + path + "': bad PGM geometry");
  }
  in.get();  // single whitespace byte before the raster
  const bool wide = maxval > 255;
  std::vector<unsigned char> buf(static_cast<size_t>(rows) * cols *
                                 (wide ? 2 : 1));
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
    throw FormatError("frame '" + path + "': truncated pixel data");
  }
  Image img(rows, cols);
  const Scalar scale = 1.0 / maxval;
  size_t i = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      unsigned v = buf[i++];
      if (wide) v = (v << 8) | buf[i++];
      img(r, c) = v * scale;
    }
  }
  return img;
}

std::string FrameFileName(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06d.pgm", index);
  return buf;
}

SequenceManifest WriteSequence(const std::string& dir,
                               const StimulusSpec& spec) {
  spec.Validate();
  fs::create_directories(dir);
  const StimulusGenerator gen(spec);
  const SequenceManifest manifest = SequenceManifest::FromSpec(spec);
  WriteManifest((fs::path(dir) / "manifest.txt").string(), manifest);
  for (int k = 0; k < spec.frame_count; ++k) {
    WritePgm16((fs::path(dir) / FrameFileName(k)).string(), gen.Frame(k));
  }
  return manifest;
}

SequenceManifest WriteSequence(const std::string& dir,
                               const SequenceManifest& manifest,
                               const std::vector<Image>& frames) {
  if (static_cast<int>(frames.size()) != manifest.frames) {
    throw InvalidParameterError("sequence write: frame count mismatch");
  }
  fs::create_directories(dir);
  WriteManifest((fs::path(dir) / "manifest.txt").string(), manifest);
  for (int k = 0; k < manifest.frames; ++k) {
    if (frames[k].rows() != manifest.height ||
        frames[k].cols() != manifest.width) {
      throw ShapeError("sequence write: frame " + std::to_string(k) +
                       " does not match manifest dimensions");
    }
    WritePgm16((fs::path(dir) / FrameFileName(k)).string(), frames[k]);
  }
  return manifest;
}

SequenceReader::SequenceReader(const std::string& dir) : dir_(dir) {
  manifest_ = ReadManifest((fs::path(dir) / "manifest.txt").string());
}

Image SequenceReader::Frame(int index) const {
  if (index < 0 || index >= manifest_.frames) {
    throw InvalidParameterError("sequence read: frame index " +
                                std::to_string(index) + " out of range");
  }
  const std::string path = (fs::path(dir_) / FrameFileName(index)).string();
  if (!fs::exists(path)) {
    throw FormatError("sequence '" + dir_ + "': missing frame file for index " +
                      std::to_string(index));
  }
  Image img = ReadPgm(path);
  if (img.rows() != manifest_.height || img.cols() != manifest_.width) {
    throw FormatError("sequence '" + dir_ + "': frame " +
                      std::to_string(index) +
                      " dimensions do not match the manifest");
  }
  return img;
}

}  // namespace tqd
