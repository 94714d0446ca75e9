#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>

#include "tqd/stimulus.h"

using namespace tqd;
namespace fs = std::filesystem;

namespace {

StimulusSpec BaseSpec() {
  StimulusSpec spec;
  spec.width = 64;
  spec.height = 32;
  spec.frame_count = 900;
  spec.sample_rate = 1000;
  spec.direction = Direction::kRight;
  spec.velocity = 150;
  spec.texture = TextureKind::kClutter;
  spec.seed = 7;
  return spec;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("tqd_stim_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int counter;
};
int TempDir::counter = 0;

}  // namespace

TEST_CASE("zero velocity yields identical frames") {
  StimulusSpec spec = BaseSpec();
  spec.velocity = 0;
  spec.frame_count = 5;
  const StimulusGenerator gen(spec);
  const Image f0 = gen.Frame(0);
  for (int k = 1; k < 5; ++k) CHECK((gen.Frame(k) == f0).all());
}

TEST_CASE("frame 840 at 150 px/s is frame 0 shifted by 126 pixels") {
  for (TextureKind tex :
       {TextureKind::kClutter, TextureKind::kBlocks, TextureKind::kStripes}) {
    StimulusSpec spec = BaseSpec();
    spec.texture = tex;
    const StimulusGenerator gen(spec);
    const Image f0 = gen.Frame(0);
    const Image f840 = gen.Frame(840);
    for (int r = 0; r < spec.height; ++r) {
      for (int c = 0; c < spec.width; ++c) {
        const int src = ((c - 126) % spec.width + spec.width) % spec.width;
        CHECK(f840(r, c) == f0(r, src));
      }
    }
  }
}

TEST_CASE("each direction translates the texture the right way") {
  StimulusSpec spec = BaseSpec();
  spec.velocity = 1000;  // one pixel per frame
  spec.frame_count = 4;
  const int w = spec.width, h = spec.height;
  for (int d = 0; d < kNumDirections; ++d) {
    spec.direction = static_cast<Direction>(d);
    const StimulusGenerator gen(spec);
    const Image f0 = gen.Frame(0);
    const Image f1 = gen.Frame(1);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        double want = 0;
        switch (spec.direction) {
          case Direction::kRight: want = f0(r, (c - 1 + w) % w); break;
          case Direction::kLeft: want = f0(r, (c + 1) % w); break;
          case Direction::kUp: want = f0((r + 1) % h, c); break;
          case Direction::kDown: want = f0((r - 1 + h) % h, c); break;
        }
        CHECK(f1(r, c) == want);
      }
    }
  }
}

TEST_CASE("generation is deterministic and respects luminance bounds") {
  StimulusSpec spec = BaseSpec();
  spec.lum_lo = 0.2;
  spec.lum_hi = 0.8;
  const StimulusGenerator a(spec);
  const StimulusGenerator b(spec);
  CHECK((a.texture() == b.texture()).all());
  CHECK((a.Frame(37) == b.Frame(37)).all());
  const Image f = a.Frame(123);
  CHECK(f.minCoeff() >= 0.2);
  CHECK(f.maxCoeff() <= 0.8);
  // Different seeds give different textures.
  spec.seed = 8;
  const StimulusGenerator c(spec);
  CHECK(!(a.texture() == c.texture()).all());
}

TEST_CASE("paper-scale protocol spec generates cleanly") {
  StimulusSpec spec = BaseSpec();
  spec.width = 500;
  spec.height = 250;
  const StimulusGenerator gen(spec);
  const Image f = gen.Frame(1);
  CHECK(f.rows() == 250);
  CHECK(f.cols() == 500);
  CHECK(gen.Timestamp(840) == doctest::Approx(0.84));
}

TEST_CASE("invalid stimulus specs are rejected") {
  StimulusSpec spec = BaseSpec();
  spec.width = 0;
  CHECK_THROWS_AS(StimulusGenerator{spec}, InvalidParameterError);
  spec = BaseSpec();
  spec.velocity = -1;
  CHECK_THROWS_AS(StimulusGenerator{spec}, InvalidParameterError);
  spec = BaseSpec();
  spec.lum_lo = 0.9;
  spec.lum_hi = 0.1;
  CHECK_THROWS_AS(StimulusGenerator{spec}, InvalidParameterError);
  CHECK_THROWS_AS(TextureFromName("marble"), InvalidParameterError);
  CHECK(TextureFromName("clutter-noise") == TextureKind::kClutter);
}

TEST_CASE("pgm round trip is lossless to 16-bit quantization") {
  TempDir tmp;
  std::uint64_t state = 99;
  auto unit = [&state]() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return ((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
  };
  for (int i = 0; i < 10; ++i) {
    Image img(13, 21);
    for (int r = 0; r < 13; ++r) {
      for (int c = 0; c < 21; ++c) img(r, c) = unit();
    }
    const std::string path = (tmp.path / FrameFileName(i)).string();
    WritePgm16(path, img);
    const Image back = ReadPgm(path);
    CHECK((back - img).abs().maxCoeff() <= 1.0 / 65535.0);
  }
}

TEST_CASE("sequence io reports structural problems with the frame index") {
  TempDir tmp;
  StimulusSpec spec = BaseSpec();
  spec.width = 16;
  spec.height = 8;
  spec.frame_count = 5;
  const std::string dir = (tmp.path / "seq").string();
  WriteSequence(dir, spec);

  SUBCASE("clean roundtrip") {
    const SequenceReader reader(dir);
    CHECK(reader.frame_count() == 5);
    CHECK(reader.manifest().direction == Direction::kRight);
    CHECK(reader.manifest().velocity_px_s == 150);
    const StimulusGenerator gen(spec);
    CHECK((reader.Frame(3) - gen.Frame(3)).abs().maxCoeff() <= 1.0 / 65535.0);
  }

  SUBCASE("missing frame file") {
    fs::remove(fs::path(dir) / FrameFileName(3));
    const SequenceReader reader(dir);
    CHECK(reader.Frame(2).rows() == 8);
    try {
      reader.Frame(3);
      FAIL("expected a format error");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
  }

  SUBCASE("manifest dimension mismatch") {
    SequenceManifest m = ReadManifest(dir + "/manifest.txt");
    m.width = 99;
    WriteManifest(dir + "/manifest.txt", m);
    const SequenceReader reader(dir);
    CHECK_THROWS_AS(reader.Frame(0), FormatError);
  }

  SUBCASE("manifest missing key") {
    std::ofstream out(dir + "/manifest.txt");
    out << "width=16\nheight=8\n";
    out.close();
    CHECK_THROWS_AS(SequenceReader{dir}, FormatError);
  }
}

TEST_CASE("manifest survives a write/read cycle") {
  TempDir tmp;
  StimulusSpec spec = BaseSpec();
  spec.direction = Direction::kDown;
  spec.velocity = 250;
  spec.texture = TextureKind::kStripes;
  spec.seed = 1234567890123ull;
  const std::string path = (tmp.path / "manifest.txt").string();
  WriteManifest(path, SequenceManifest::FromSpec(spec));
  const SequenceManifest m = ReadManifest(path);
  CHECK(m.width == spec.width);
  CHECK(m.height == spec.height);
  CHECK(m.frames == spec.frame_count);
  CHECK(m.sample_rate_hz == spec.sample_rate);
  CHECK(m.direction == Direction::kDown);
  CHECK(m.velocity_px_s == 250);
  CHECK(m.texture == "stripes");
  CHECK(m.seed == spec.seed);
}
