#ifndef TQD_MODEL_H_
#define TQD_MODEL_H_

#include "tqd/correlator.h"
#include "tqd/pipeline.h"

namespace tqd {

// Streaming retina -> lamina -> medulla -> lobula model computing both
// detector variants over one shared front end. Frames must be fed
// sequentially at the configured sample interval; independent instances
// are safe to run concurrently.
class TqdModel {
 public:
  struct StageOutputs {
    Image retina;            // blurred luminance
    Image contrast;          // temporal band-pass output
    Image inhibited;         // after lateral inhibition
    ChannelPair channels;    // rectified ON/OFF
    ChannelPair sparse;      // after the local-maximum operation
    ChannelPair delayed;     // delayed plain channels
    ChannelPair delayed_sparse;
  };

  struct FrameResult {
    int frame_index = 0;
    Scalar timestamp = 0;
    bool warmup = false;
    DirectionalField classic;
    DirectionalField improved;
  };

  TqdModel(const ModelConfig& config, int rows, int cols);

  FrameResult Step(const Image& frame, Scalar timestamp);

  int WarmupFrames() const { return warmup_frames_; }
  Scalar WarmupSeconds() const { return warmup_frames_ * config_.dt; }
  bool IsWarmupFrame(int frame_index) const {
    return frame_index < warmup_frames_;
  }

  const ModelConfig& config() const { return config_; }
  const StageOutputs& stages() const { return stages_; }

 private:
  ModelConfig config_;
  int rows_ = 0;
  int cols_ = 0;

  SpatialKernel retina_kernel_;
  SpatialKernel inhibit_pos_;
  SpatialKernel inhibit_neg_;
  TemporalStreamFilter contrast_filter_;
  TemporalStreamFilter inhibit_pos_filter_;
  TemporalStreamFilter inhibit_neg_filter_;
  TemporalStreamFilter delay_on_;
  TemporalStreamFilter delay_off_;
  TemporalStreamFilter delay_on_sparse_;
  TemporalStreamFilter delay_off_sparse_;

  StageOutputs stages_;
  int warmup_frames_ = 0;
  int frame_index_ = 0;
  Scalar last_timestamp_ = 0;
};

}  // namespace tqd

#endif  // TQD_MODEL_H_
