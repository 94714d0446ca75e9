#ifndef TQD_METRICS_H_
#define TQD_METRICS_H_

#include <array>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tqd/model.h"
#include "tqd/stimulus.h"

namespace tqd {

// Ascending projection thresholds; the first entry is pinned at 0.01.
struct ThresholdSchedule {
  std::vector<Scalar> gammas;

  static ThresholdSchedule Default();  // 0.01, 0.05, 0.10, ..., 0.50
  void Validate() const;
};

// Number of pixels per direction whose normalized response strictly
// exceeds gamma. The field must be normalized (global max <= 1).
std::array<int, kNumDirections> CountDetections(const DirectionalField& field,
                                                Scalar gamma);

// Fraction of supra-threshold points lying in the true direction channel;
// empty when no direction has any (0/0 carries no information).
std::optional<Scalar> DetectionRate(
    const std::array<int, kNumDirections>& counts, Direction theta0);

// Each true-direction count divided by their sum over the schedule; all
// empty when nothing was detected at any threshold.
std::vector<std::optional<Scalar>> NormalizedPoints(
    const std::vector<int>& counts_at_theta0);

// Frame-addressable view of a sequence, decoupling metrics from storage.
struct SequenceView {
  int width = 0;
  int height = 0;
  int frames = 0;
  Scalar sample_rate = 0;
  Direction direction = Direction::kRight;
  Scalar velocity = 0;
  std::function<Image(int)> frame;

  static SequenceView FromReader(const SequenceReader& reader);
  static SequenceView FromGenerator(const StimulusGenerator& generator);
};

// Detection table of one (variant, sequence, frame) evaluation.
struct MetricsCell {
  std::string label;
  Variant variant = Variant::kClassic;
  Scalar velocity = 0;
  int frame = 0;
  Direction theta0 = Direction::kRight;
  std::vector<std::array<int, kNumDirections>> counts;  // per gamma
  std::vector<std::optional<Scalar>> dr;                // per gamma
  std::vector<std::optional<Scalar>> np;                // per gamma
};

MetricsCell EvaluateCell(const DirectionalField& normalized,
                         const ThresholdSchedule& schedule, Direction theta0,
                         Scalar velocity, int frame, const std::string& label);

struct MetricsReport {
  ModelConfig config;
  ThresholdSchedule schedule;
  std::vector<MetricsCell> cells;

  // CSV columns: variant,velocity,frame,gamma,theta_rad,N,DR,NP.
  // DR/NP are repeated on each of the four direction rows of a gamma;
  // undefined values are left empty.
  void WriteCsv(std::ostream& out) const;
  void WriteSummary(std::ostream& out) const;
};

// Streams the sequence through both model variants once and evaluates the
// detection tables at `frame_index` (which must be past warm-up).
MetricsReport CompareModels(const SequenceView& sequence,
                            const ModelConfig& config,
                            const ThresholdSchedule& schedule,
                            int frame_index);

// Single-variant evaluation used by the CLI when scoring existing runs.
MetricsCell EvaluateSequence(const SequenceView& sequence,
                             const ModelConfig& config, Variant variant,
                             const ThresholdSchedule& schedule,
                             int frame_index, Direction theta0,
                             const std::string& label);

}  // namespace tqd

#endif  // TQD_METRICS_H_
