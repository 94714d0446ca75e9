#ifndef TQD_STIMULUS_H_
#define TQD_STIMULUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "tqd/types.h"

namespace tqd {

enum class TextureKind { kClutter, kBlocks, kStripes };

std::string TextureName(TextureKind kind);
TextureKind TextureFromName(const std::string& name);

// A textured background translating at constant velocity in one cardinal
// direction, wrapping toroidally.
struct StimulusSpec {
  int width = 0;
  int height = 0;
  int frame_count = 0;
  Scalar sample_rate = 1000.0;  // Hz
  Direction direction = Direction::kRight;
  Scalar velocity = 0.0;  // pixels/second
  TextureKind texture = TextureKind::kClutter;
  std::uint64_t seed = 0;
  Scalar lum_lo = 0.05;
  Scalar lum_hi = 0.95;

  void Validate() const;
};

// Frames are pure functions of (spec, index): frame k shows the texture
// translated by velocity*k/sample_rate pixels, sub-pixel shifts realized
// by linear interpolation on the wrapped grid.
class StimulusGenerator {
 public:
  explicit StimulusGenerator(const StimulusSpec& spec);

  const StimulusSpec& spec() const { return spec_; }
  const Image& texture() const { return texture_; }
  Image Frame(int index) const;
  Scalar Timestamp(int index) const { return index / spec_.sample_rate; }

 private:
  StimulusSpec spec_;
  Image texture_;
};

// Plain-text sequence descriptor stored next to the frame files.
struct SequenceManifest {
  int width = 0;
  int height = 0;
  int frames = 0;
  Scalar sample_rate_hz = 0;
  Direction direction = Direction::kRight;
  Scalar velocity_px_s = 0;
  std::string texture;
  std::uint64_t seed = 0;
  Scalar lum_lo = 0.05;
  Scalar lum_hi = 0.95;

  static SequenceManifest FromSpec(const StimulusSpec& spec);
};

void WriteManifest(const std::string& path, const SequenceManifest& m);
SequenceManifest ReadManifest(const std::string& path);

// 16-bit binary PGM (P5, maxval 65535, big-endian samples). Values are
// clamped to [0,1] and quantized to 16 bits on write.
void WritePgm16(const std::string& path, const Image& img);
Image ReadPgm(const std::string& path);

std::string FrameFileName(int index);

// Writes manifest + frame_000000.pgm... under `dir` (created if needed).
SequenceManifest WriteSequence(const std::string& dir,
                               const StimulusSpec& spec);
SequenceManifest WriteSequence(const std::string& dir,
                               const SequenceManifest& manifest,
                               const std::vector<Image>& frames);

// Reads a sequence directory written by WriteSequence; frames are loaded
// lazily and validated against the manifest.
class SequenceReader {
 public:
  explicit SequenceReader(const std::string& dir);

  const SequenceManifest& manifest() const { return manifest_; }
  int frame_count() const { return manifest_.frames; }
  Image Frame(int index) const;
  Scalar Timestamp(int index) const {
    return index / manifest_.sample_rate_hz;
  }

 private:
  std::string dir_;
  SequenceManifest manifest_;
};

}  // namespace tqd

#endif  // TQD_STIMULUS_H_
