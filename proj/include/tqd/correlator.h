#ifndef TQD_CORRELATOR_H_
#define TQD_CORRELATOR_H_

#include <array>
#include <optional>
#include <ostream>

#include "tqd/pipeline.h"
#include "tqd/types.h"

namespace tqd {

enum class Variant { kClassic, kImproved };

std::string VariantName(Variant v);
Variant VariantFromName(const std::string& name);

// Offset of the delayed sample relative to the current pixel for motion
// along `theta`: the sample is taken from the neighbor the moving feature
// passed baseline_d pixels earlier. With rows growing downward this is
//   right (0, -d)   up (+d, 0)   left (0, +d)   down (-d, 0).
std::pair<int, int> DelayedSampleOffset(Direction theta, int baseline_d);

// Per-direction detector responses of one polarity (T4 for ON, T5 for
// OFF).
struct DetectorField {
  std::array<Image, kNumDirections> values;
  Variant variant = Variant::kClassic;
  Scalar timestamp = 0;
};

// Per-direction wide-field responses after summing the two polarities.
struct DirectionalField {
  std::array<Image, kNumDirections> values;
  Variant variant = Variant::kClassic;
  Scalar timestamp = 0;

  int rows() const { return static_cast<int>(values[0].rows()); }
  int cols() const { return static_cast<int>(values[0].cols()); }
};

struct Correlation {
  DetectorField t4;
  DetectorField t5;
};

// Delay-and-correlate detectors: for each direction,
//   t4 = current.on  * delayed.on (sampled at the offset neighbor)
//   t5 = current.off * delayed.off (likewise)
// `current` and `delayed` must share shape and timestamp.
Correlation Correlate(const ChannelPair& current, const ChannelPair& delayed,
                      int baseline_d, Boundary boundary, Variant variant);

// Pointwise sum of the two detector fields per direction.
DirectionalField LptcOutput(const DetectorField& t4, const DetectorField& t5);

// Divides all values by the maximum over (x, y, theta); an all-zero field
// is returned unchanged.
DirectionalField Normalize(const DirectionalField& field);

// Mean per-pixel response below which a frame is treated as motionless
// (inputs are luminance in [0,1], so responses are dimensionally bounded).
inline constexpr Scalar kNoMotionMeanResponse = 1e-9;

struct DirectionEstimate {
  Scalar timestamp = 0;
  std::array<Scalar, kNumDirections> sums{};
  std::optional<Direction> theta;  // nullopt: no motion detected
  Scalar margin = 0;               // best/second-best sum; inf if second is 0
  bool tie = false;
};

// Per-direction response sums and their argmax. Ties break towards the
// lower direction index (right > up > left > down priority) and set the
// tie flag; a field whose best mean response is below
// kNoMotionMeanResponse yields the no-motion estimate.
DirectionEstimate EstimateDirection(const DirectionalField& field);

// CSV with header t_ms,theta_rad,sum_0,sum_90,sum_180,sum_270,margin,tie,warmup.
// No-motion rows leave theta_rad and margin empty.
void WriteDirectionCsvHeader(std::ostream& out);
void WriteDirectionCsvRow(std::ostream& out, const DirectionEstimate& estimate,
                          bool warmup);

}  // namespace tqd

#endif  // TQD_CORRELATOR_H_
