#include "tqd/model.h"

#include <algorithm>
#include <cmath>

#include "tqd/image_ops.h"

namespace tqd {

TqdModel::TqdModel(const ModelConfig& config, int rows, int cols)
    : config_(config), rows_(rows), cols_(cols) {
  config_.Validate();
  if (rows_ < 1 || cols_ < 1) {
    throw ShapeError("model: frame dimensions must be at least 1x1");
  }
  const bool renorm = config_.renormalize_kernels;
  retina_kernel_ = MakeGaussianKernel(
      config_.sigma1, DefaultGaussianRadius(config_.sigma1), renorm);
  contrast_filter_ = TemporalStreamFilter(MakeHighpassKernel(
      config_.n1, config_.tau1, config_.n2, config_.tau2, config_.dt, renorm));

  SpaceTimeKernel inhibition =
      MakeInhibitionKernel(config_.sigma2, config_.alpha1, config_.alpha2,
                           /*radius=*/0, /*horizon=*/0, config_.dt, renorm);
  inhibit_pos_ = std::move(inhibition.terms[0].spatial);
  inhibit_neg_ = std::move(inhibition.terms[1].spatial);
  inhibit_pos_filter_ =
      TemporalStreamFilter(std::move(inhibition.terms[0].temporal));
  inhibit_neg_filter_ =
      TemporalStreamFilter(std::move(inhibition.terms[1].temporal));

  const TemporalKernel delay =
      MakeGammaKernel(config_.n3, config_.tau3, config_.dt, 0, renorm);
  delay_on_ = TemporalStreamFilter(delay);
  delay_off_ = TemporalStreamFilter(delay);
  delay_on_sparse_ = TemporalStreamFilter(delay);
  delay_off_sparse_ = TemporalStreamFilter(delay);

  // A frame is warm until every cascaded temporal kernel has seen a full
  // history: band-pass, then the slower inhibition low-pass, then the
  // delay filter.
  const int inhibit_len = std::max(inhibit_pos_filter_.kernel().length(),
                                   inhibit_neg_filter_.kernel().length());
  warmup_frames_ = (contrast_filter_.kernel().length() - 1) +
                   (inhibit_len - 1) + (delay.length() - 1);
}

TqdModel::FrameResult TqdModel::Step(const Image& frame, Scalar timestamp) {
  if (frame.rows() != rows_ || frame.cols() != cols_) {
    throw ShapeError("model: frame dimensions do not match initialization");
  }
  if (frame_index_ > 0) {
    if (timestamp <= last_timestamp_) {
      throw SequencingError("model: frame timestamps must strictly increase");
    }
    if (std::abs(timestamp - (last_timestamp_ + config_.dt)) >
        0.25 * config_.dt) {
      throw SequencingError(
          "model: frame spacing does not match the configured dt");
    }
  }
  const Boundary b = config_.boundary;

  stages_.retina = RetinaStage(frame, retina_kernel_, b);
  stages_.contrast = contrast_filter_.Push(stages_.retina);
  stages_.inhibited =
      inhibit_pos_filter_.Push(ConvolveSame(stages_.contrast, inhibit_pos_, b)) +
      inhibit_neg_filter_.Push(ConvolveSame(stages_.contrast, inhibit_neg_, b));

  stages_.channels = SplitOnOff(stages_.inhibited, timestamp);
  stages_.sparse.on = MaxOperation(stages_.channels.on, config_.omega_half, b);
  stages_.sparse.off =
      MaxOperation(stages_.channels.off, config_.omega_half, b);
  stages_.sparse.timestamp = timestamp;

  stages_.delayed.on = delay_on_.Push(stages_.channels.on);
  stages_.delayed.off = delay_off_.Push(stages_.channels.off);
  stages_.delayed.timestamp = timestamp;
  stages_.delayed_sparse.on = delay_on_sparse_.Push(stages_.sparse.on);
  stages_.delayed_sparse.off = delay_off_sparse_.Push(stages_.sparse.off);
  stages_.delayed_sparse.timestamp = timestamp;

  FrameResult result;
  result.frame_index = frame_index_;
  result.timestamp = timestamp;
  result.warmup = IsWarmupFrame(frame_index_);

  const Correlation classic =
      Correlate(stages_.channels, stages_.delayed, config_.baseline_d, b,
                Variant::kClassic);
  result.classic = LptcOutput(classic.t4, classic.t5);
  const Correlation improved =
      Correlate(stages_.sparse, stages_.delayed_sparse, config_.baseline_d, b,
                Variant::kImproved);
  result.improved = LptcOutput(improved.t4, improved.t5);

  ++frame_index_;
  last_timestamp_ = timestamp;
  return result;
}

}  // namespace tqd
