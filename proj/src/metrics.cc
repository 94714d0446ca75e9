#include "tqd/metrics.h"

#include <cmath>
#include <cstdio>

namespace tqd {

namespace {

std::string FormatShort(Scalar v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string FormatFull(Scalar v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string FormatOptional(const std::optional<Scalar>& v) {
  return v ? FormatFull(*v) : std::string();
}

}  // namespace

ThresholdSchedule ThresholdSchedule::Default() {
  ThresholdSchedule s;
  s.gammas = {0.01, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50};
  return s;
}

void ThresholdSchedule::Validate() const {
  if (gammas.empty()) {
    throw InvalidParameterError("threshold schedule must not be empty");
  }
  if (gammas.front() != 0.01) {
    throw InvalidParameterError(
        "threshold schedule must start at gamma = 0.01");
  }
  for (size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] > 0) || gammas[i] > 1) {
      throw InvalidParameterError("thresholds must lie in (0, 1]");
    }
    if (i > 0 && !(gammas[i] > gammas[i - 1])) {
      throw InvalidParameterError(
          "threshold schedule must be strictly increasing");
    }
  }
}

std::array<int, kNumDirections> CountDetections(const DirectionalField& field,
                                                Scalar gamma) {
  if (!(gamma > 0) || gamma > 1) {
    throw InvalidParameterError("projection threshold must lie in (0, 1]");
  }
  Scalar peak = 0;
  for (const Image& v : field.values) peak = std::max(peak, v.maxCoeff());
  if (peak > 1.0 + 1e-9) {
    throw ContractError("detection counting requires a normalized field");
  }
  std::array<int, kNumDirections> counts{};
  for (int i = 0; i < kNumDirections; ++i) {
    counts[i] = static_cast<int>((field.values[i] > gamma).count());
  }
  return counts;
}

std::optional<Scalar> DetectionRate(
    const std::array<int, kNumDirections>& counts, Direction theta0) {
  long total = 0;
  for (int c : counts) total += c;
  if (total == 0) return std::nullopt;
  return static_cast<Scalar>(counts[static_cast<int>(theta0)]) / total;
}

std::vector<std::optional<Scalar>> NormalizedPoints(
    const std::vector<int>& counts_at_theta0) {
  if (counts_at_theta0.empty()) {
    throw InvalidParameterError("normalized points: empty schedule");
  }
  long total = 0;
  for (int c : counts_at_theta0) total += c;
  std::vector<std::optional<Scalar>> np(counts_at_theta0.size());
  if (total == 0) return np;
  for (size_t i = 0; i < counts_at_theta0.size(); ++i) {
    np[i] = static_cast<Scalar>(counts_at_theta0[i]) / total;
  }
  return np;
}

SequenceView SequenceView::FromReader(const SequenceReader& reader) {
  SequenceView v;
  const SequenceManifest& m = reader.manifest();
  v.width = m.width;
  v.height = m.height;
  v.frames = m.frames;
  v.sample_rate = m.sample_rate_hz;
  v.direction = m.direction;
  v.velocity = m.velocity_px_s;
  v.frame = [&reader](int k) { return reader.Frame(k); };
  return v;
}

SequenceView SequenceView::FromGenerator(const StimulusGenerator& generator) {
  SequenceView v;
  const StimulusSpec& s = generator.spec();
  v.width = s.width;
  v.height = s.height;
  v.frames = s.frame_count;
  v.sample_rate = s.sample_rate;
  v.direction = s.direction;
  v.velocity = s.velocity;
  v.frame = [&generator](int k) { return generator.Frame(k); };
  return v;
}

MetricsCell EvaluateCell(const DirectionalField& normalized,
                         const ThresholdSchedule& schedule, Direction theta0,
                         Scalar velocity, int frame, const std::string& label) {
  schedule.Validate();
  MetricsCell cell;
  cell.label = label;
  cell.variant = normalized.variant;
  cell.velocity = velocity;
  cell.frame = frame;
  cell.theta0 = theta0;
  std::vector<int> truth_counts;
  for (Scalar gamma : schedule.gammas) {
    const auto counts = CountDetections(normalized, gamma);
    cell.counts.push_back(counts);
    cell.dr.push_back(DetectionRate(counts, theta0));
    truth_counts.push_back(counts[static_cast<int>(theta0)]);
  }
  cell.np = NormalizedPoints(truth_counts);
  return cell;
}

namespace {

// Runs the model over frames [0, frame_index] and returns the normalized
// fields of both variants at frame_index.
std::pair<DirectionalField, DirectionalField> FieldsAtFrame(
    const SequenceView& sequence, const ModelConfig& config, int frame_index) {
  if (!sequence.frame) {
    throw InvalidParameterError("sequence view has no frame source");
  }
  if (std::abs(1.0 / sequence.sample_rate - config.dt) > 1e-9 * config.dt) {
    throw InvalidParameterError(
        "sequence sample rate does not match the configured dt");
  }
  if (frame_index < 0 || frame_index >= sequence.frames) {
    throw InvalidParameterError("metrics frame index out of range");
  }
  TqdModel model(config, sequence.height, sequence.width);
  if (model.IsWarmupFrame(frame_index)) {
    throw WarmupError("frame " + std::to_string(frame_index) +
                      " is inside the warm-up window (first " +
                      std::to_string(model.WarmupFrames()) + " frames)");
  }
  TqdModel::FrameResult result;
  for (int k = 0; k <= frame_index; ++k) {
    result = model.Step(sequence.frame(k), k / sequence.sample_rate);
  }
  return {Normalize(result.classic), Normalize(result.improved)};
}

}  // namespace

MetricsReport CompareModels(const SequenceView& sequence,
                            const ModelConfig& config,
                            const ThresholdSchedule& schedule,
                            int frame_index) {
  const auto [classic, improved] = FieldsAtFrame(sequence, config, frame_index);
  MetricsReport report;
  report.config = config;
  report.schedule = schedule;
  report.cells.push_back(EvaluateCell(classic, schedule, sequence.direction,
                                      sequence.velocity, frame_index,
                                      "classic"));
  report.cells.push_back(EvaluateCell(improved, schedule, sequence.direction,
                                      sequence.velocity, frame_index,
                                      "improved"));
  return report;
}

MetricsCell EvaluateSequence(const SequenceView& sequence,
                             const ModelConfig& config, Variant variant,
                             const ThresholdSchedule& schedule,
                             int frame_index, Direction theta0,
                             const std::string& label) {
  const auto fields = FieldsAtFrame(sequence, config, frame_index);
  const DirectionalField& field =
      variant == Variant::kClassic ? fields.first : fields.second;
  return EvaluateCell(field, schedule, theta0, sequence.velocity, frame_index,
                      label);
}

void MetricsReport::WriteCsv(std::ostream& out) const {
  out << "variant,velocity,frame,gamma,theta_rad,N,DR,NP\n";
  for (const MetricsCell& cell : cells) {
    for (size_t g = 0; g < schedule.gammas.size(); ++g) {
      for (int i = 0; i < kNumDirections; ++i) {
        out << VariantName(cell.variant) << ","
            << FormatShort(cell.velocity) << "," << cell.frame << ","
            << FormatShort(schedule.gammas[g]) << ","
            << FormatFull(ThetaRadians(static_cast<Direction>(i))) << ","
            << cell.counts[g][i] << "," << FormatOptional(cell.dr[g]) << ","
            << FormatOptional(cell.np[g]) << "\n";
      }
    }
  }
}

void MetricsReport::WriteSummary(std::ostream& out) const {
  out << "{\n";
  out << "  tool_version = " << kToolVersion << "\n";
  out << "  schedule =";
  for (Scalar g : schedule.gammas) out << " " << FormatShort(g);
  out << "\n";
  for (const auto& [key, value] : config.KeyValues()) {
    out << "  config." << key << " = " << value << "\n";
  }
  for (const MetricsCell& cell : cells) {
    const std::string p = "  " + cell.label + ".";
    out << p << "variant = " << VariantName(cell.variant) << "\n";
    out << p << "velocity = " << FormatShort(cell.velocity) << "\n";
    out << p << "frame = " << cell.frame << "\n";
    out << p << "theta0_rad = " << FormatFull(ThetaRadians(cell.theta0))
        << "\n";
    out << p << "dr_at_gamma0 = " << FormatOptional(cell.dr.front()) << "\n";
    Scalar dr_min = 1.0;
    bool dr_all_defined = true;
    for (const auto& dr : cell.dr) {
      if (dr) dr_min = std::min(dr_min, *dr);
      else dr_all_defined = false;
    }
    out << p << "dr_min = " << (dr_all_defined ? FormatFull(dr_min) : "")
        << "\n";
    out << p << "dr_min_ge_0.9 = "
        << ((dr_all_defined && dr_min >= 0.9) ? "true" : "false") << "\n";
  }
  // Ordering check at gamma0 between every improved/classic cell pair
  // evaluated on the same sequence frame.
  for (const MetricsCell& a : cells) {
    if (a.variant != Variant::kImproved) continue;
    for (const MetricsCell& b : cells) {
      if (b.variant != Variant::kClassic || b.frame != a.frame ||
          b.velocity != a.velocity) {
        continue;
      }
      const bool ok = a.dr.front() && b.dr.front()
                          ? *a.dr.front() >= *b.dr.front()
                          : false;
      out << "  ordering." << a.label << "_ge_" << b.label << " = "
          << (ok ? "true" : "false") << "\n";
    }
  }
  out << "}\n";
}

}  // namespace tqd
