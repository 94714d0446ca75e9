#include "tqd/correlator.h"

#include <cmath>
#include <cstdio>
#include <limits>

#include "tqd/image_ops.h"

namespace tqd {

namespace {

void CheckSameShape(const Image& a, const Image& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(what) + ": field shapes do not match");
  }
}

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

}  // namespace

std::string VariantName(Variant v) {
  return v == Variant::kClassic ? "classic" : "improved";
}

Variant VariantFromName(const std::string& name) {
  if (name == "classic") return Variant::kClassic;
  if (name == "improved") return Variant::kImproved;
  throw InvalidParameterError("unknown model variant '" + name +
                              "' (expected classic or improved)");
}

std::pair<int, int> DelayedSampleOffset(Direction theta, int baseline_d) {
  switch (theta) {
    case Direction::kRight: return {0, -baseline_d};
    case Direction::kUp: return {baseline_d, 0};
    case Direction::kLeft: return {0, baseline_d};
    case Direction::kDown: return {-baseline_d, 0};
  }
  throw InvalidParameterError("invalid direction value");
}

Correlation Correlate(const ChannelPair& current, const ChannelPair& delayed,
                      int baseline_d, Boundary boundary, Variant variant) {
  CheckSameShape(current.on, current.off, "correlate");
  CheckSameShape(current.on, delayed.on, "correlate");
  CheckSameShape(current.on, delayed.off, "correlate");
  if (std::abs(current.timestamp - delayed.timestamp) > 1e-12) {
    throw ContractError("correlate: current and delayed timestamps differ");
  }
  if (baseline_d < 1) {
    throw InvalidParameterError("correlate: baseline_d must be >= 1");
  }
  Correlation out;
  out.t4.variant = out.t5.variant = variant;
  out.t4.timestamp = out.t5.timestamp = current.timestamp;
  for (int i = 0; i < kNumDirections; ++i) {
    const auto [dr, dc] =
        DelayedSampleOffset(static_cast<Direction>(i), baseline_d);
    out.t4.values[i] =
        current.on * SampleShifted(delayed.on, dr, dc, boundary);
    out.t5.values[i] =
        current.off * SampleShifted(delayed.off, dr, dc, boundary);
  }
  return out;
}

DirectionalField LptcOutput(const DetectorField& t4, const DetectorField& t5) {
  if (t4.variant != t5.variant) {
    throw ContractError("lptc output: detector variants do not match");
  }
  if (std::abs(t4.timestamp - t5.timestamp) > 1e-12) {
    throw ContractError("lptc output: detector timestamps differ");
  }
  DirectionalField f;
  f.variant = t4.variant;
  f.timestamp = t4.timestamp;
  for (int i = 0; i < kNumDirections; ++i) {
    CheckSameShape(t4.values[i], t5.values[i], "lptc output");
    f.values[i] = t4.values[i] + t5.values[i];
  }
  return f;
}

DirectionalField Normalize(const DirectionalField& field) {
  Scalar peak = 0;
  for (const Image& v : field.values) peak = std::max(peak, v.maxCoeff());
  DirectionalField out;
  out.variant = field.variant;
  out.timestamp = field.timestamp;
  for (int i = 0; i < kNumDirections; ++i) {
    out.values[i] = peak > 0 ? Image(field.values[i] / peak) : field.values[i];
  }
  return out;
}

DirectionEstimate EstimateDirection(const DirectionalField& field) {
  for (int i = 1; i < kNumDirections; ++i) {
    CheckSameShape(field.values[0], field.values[i], "direction estimate");
  }
  DirectionEstimate e;
  e.timestamp = field.timestamp;
  int best = 0;
  for (int i = 0; i < kNumDirections; ++i) {
    e.sums[i] = field.values[i].sum();
    if (e.sums[i] > e.sums[best]) best = i;
  }
  Scalar second = -std::numeric_limits<Scalar>::infinity();
  for (int i = 0; i < kNumDirections; ++i) {
    if (i != best) second = std::max(second, e.sums[i]);
  }
  const auto pixels = static_cast<Scalar>(field.values[0].size());
  if (e.sums[best] <= kNoMotionMeanResponse * pixels) {
    e.theta.reset();
    e.margin = std::numeric_limits<Scalar>::quiet_NaN();
    e.tie = false;
    return e;
  }
  e.theta = static_cast<Direction>(best);
  e.tie = second >= e.sums[best] * (1.0 - 1e-12);
  e.margin = second > 0 ? e.sums[best] / second
                        : std::numeric_limits<Scalar>::infinity();
  return e;
}

void WriteDirectionCsvHeader(std::ostream& out) {
  out << "t_ms,theta_rad,sum_0,sum_90,sum_180,sum_270,margin,tie,warmup\n";
}

void WriteDirectionCsvRow(std::ostream& out, const DirectionEstimate& estimate,
                          bool warmup) {
  out << FormatShort(estimate.timestamp * 1000.0) << ",";
  if (estimate.theta) out << FormatFull(ThetaRadians(*estimate.theta));
  out << ",";
  for (int i = 0; i < kNumDirections; ++i) {
    out << FormatFull(estimate.sums[i]) << ",";
  }
  if (estimate.theta) out << FormatFull(estimate.margin);
  out << "," << (estimate.tie ? 1 : 0) << "," << (warmup ? 1 : 0) << "\n";
}

}  // namespace tqd
