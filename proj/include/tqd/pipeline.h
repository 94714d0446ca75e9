#ifndef TQD_PIPELINE_H_
#define TQD_PIPELINE_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tqd/kernels.h"
#include "tqd/types.h"

namespace tqd {

// All free parameters of the model. The temporal constants are in
// seconds, spatial ones in pixels. The config file is one key=value per
// line with keys named exactly like the fields; unknown keys are errors.
struct ModelConfig {
  Scalar sigma1 = 1.0;  // retina blur

  int n1 = 2;            // temporal-contrast band-pass: fast minus slow
  Scalar tau1 = 0.003;
  int n2 = 2;
  Scalar tau2 = 0.009;

  Scalar sigma2 = 1.5;   // inhibition center width; surround is 2*sigma2
  Scalar alpha1 = 0.003;
  Scalar alpha2 = 0.015;

  int n3 = 3;            // delay filter
  Scalar tau3 = 0.008;

  int omega_half = 11;   // half-width of the local-maximum window
  int baseline_d = 2;    // correlation sampling distance in pixels
  Scalar dt = 0.001;
  bool renormalize_kernels = false;
  Boundary boundary = Boundary::kReplicate;

  void Validate() const;

  static ModelConfig FromFile(const std::string& path);
  static ModelConfig FromKeyValues(
      const std::map<std::string, std::string>& kv,
      const std::string& context);

  // Ordered snapshot used for config files and run manifests; parsing the
  // result reproduces the config exactly.
  std::vector<std::pair<std::string, std::string>> KeyValues() const;
};

// Parses a key=value-per-line file ('#' comments allowed); duplicate keys
// are rejected.
std::map<std::string, std::string> ReadKeyValueFile(const std::string& path,
                                                    const std::string& context);

// One ON/OFF channel sample. Both fields are nonnegative; before the max
// operation they are disjoint (on*off = 0 pointwise).
struct ChannelPair {
  Image on;
  Image off;
  Scalar timestamp = 0;
};

// Causal streaming convolution with a finite temporal kernel; keeps a
// ring of the last `length` input frames. History before the first push
// is zero.
class TemporalStreamFilter {
 public:
  TemporalStreamFilter() = default;
  explicit TemporalStreamFilter(TemporalKernel kernel)
      : kernel_(std::move(kernel)) {}

  Image Push(const Image& x);
  void Reset();
  const TemporalKernel& kernel() const { return kernel_; }

 private:
  TemporalKernel kernel_;
  std::vector<Image> ring_;
  int next_ = 0;
  int filled_ = 0;
};

// Spatial blur of the photoreceptor layer.
Image RetinaStage(const Image& frame, const SpatialKernel& kernel,
                  Boundary boundary);

// Half-wave rectification into brightness-increment / decrement channels:
// on = (|p| + p)/2, off = (|p| - p)/2.
ChannelPair SplitOnOff(const Image& laterally_inhibited, Scalar timestamp);

// Local-maximum sparsification: a pixel keeps its value iff it equals the
// maximum over the sliding square window of side 2*omega_half+1 centered
// on it (ties preserved); all other pixels become 0. Input must be
// nonnegative.
Image MaxOperation(const Image& field, int omega_half, Boundary boundary);

}  // namespace tqd

#endif  // TQD_PIPELINE_H_
