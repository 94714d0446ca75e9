#include "tqd/pipeline.h"

#include <cstdio>
#include <fstream>

#include "tqd/image_ops.h"

namespace tqd {

namespace {

std::string FormatScalarFull(Scalar v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Scalar ParseScalar(const std::string& s, const std::string& key,
                   const std::string& context) {
  try {
    size_t pos = 0;
    const Scalar v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidParameterError(context + ": bad numeric value '" + s +
                                "' for key '" + key + "'");
  }
}

int ParseInt(const std::string& s, const std::string& key,
             const std::string& context) {
  try {
    size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidParameterError(context + ": bad integer value '" + s +
                                "' for key '" + key + "'");
  }
}

bool ParseBool(const std::string& s, const std::string& key,
               const std::string& context) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw InvalidParameterError(context + ": bad boolean value '" + s +
                              "' for key '" + key + "'");
}

}  // namespace

void ModelConfig::Validate() const {
  if (!(sigma1 > 0) || !(sigma2 > 0)) {
    throw InvalidParameterError("config: sigma values must be > 0");
  }
  if (n1 < 1 || n2 < 1 || n3 < 1) {
    throw InvalidParameterError("config: gamma orders must be >= 1");
  }
  if (!(tau1 > 0) || !(tau2 > 0) || !(tau3 > 0)) {
    throw InvalidParameterError("config: time constants must be > 0");
  }
  if (n1 == n2 && tau1 == tau2) {
    throw InvalidParameterError(
        "config: (n1, tau1) must differ from (n2, tau2)");
  }
  if (!(alpha1 > 0) || !(alpha2 > alpha1)) {
    throw InvalidParameterError("config: requires alpha2 > alpha1 > 0");
  }
  if (omega_half < 1) {
    throw InvalidParameterError("config: omega_half must be >= 1");
  }
  if (baseline_d < 1) {
    throw InvalidParameterError("config: baseline_d must be >= 1");
  }
  if (!(dt > 0)) {
    throw InvalidParameterError("config: dt must be > 0");
  }
}

ModelConfig ModelConfig::FromKeyValues(
    const std::map<std::string, std::string>& kv, const std::string& context) {
  ModelConfig cfg;
  for (const auto& [key, value] : kv) {
    if (key == "sigma1") cfg.sigma1 = ParseScalar(value, key, context);
    else if (key == "n1") cfg.n1 = ParseInt(value, key, context);
    else if (key == "tau1") cfg.tau1 = ParseScalar(value, key, context);
    else if (key == "n2") cfg.n2 = ParseInt(value, key, context);
    else if (key == "tau2") cfg.tau2 = ParseScalar(value, key, context);
    else if (key == "sigma2") cfg.sigma2 = ParseScalar(value, key, context);
    else if (key == "alpha1") cfg.alpha1 = ParseScalar(value, key, context);
    else if (key == "alpha2") cfg.alpha2 = ParseScalar(value, key, context);
    else if (key == "n3") cfg.n3 = ParseInt(value, key, context);
    else if (key == "tau3") cfg.tau3 = ParseScalar(value, key, context);
    else if (key == "omega_half") cfg.omega_half = ParseInt(value, key, context);
    else if (key == "baseline_d") cfg.baseline_d = ParseInt(value, key, context);
    else if (key == "dt") cfg.dt = ParseScalar(value, key, context);
    else if (key == "renormalize_kernels")
      cfg.renormalize_kernels = ParseBool(value, key, context);
    else if (key == "boundary") cfg.boundary = BoundaryFromName(value);
    else
      throw InvalidParameterError(context + ": unknown config key '" + key +
                                  "'");
  }
  cfg.Validate();
  return cfg;
}

std::map<std::string, std::string> ReadKeyValueFile(
    const std::string& path, const std::string& context) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + context + " '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidParameterError(context + " '" + path + "' line " +
                                  std::to_string(line_no) +
                                  ": expected key=value");
    }
    std::string key = line.substr(0, eq);
    if (kv.count(key)) {
      throw InvalidParameterError(context + " '" + path +
                                  "': duplicate key '" + key + "'");
    }
    kv[key] = line.substr(eq + 1);
  }
  return kv;
}

ModelConfig ModelConfig::FromFile(const std::string& path) {
  return FromKeyValues(ReadKeyValueFile(path, "config"),
                       "config '" + path + "'");
}

std::vector<std::pair<std::string, std::string>> ModelConfig::KeyValues()
    const {
  return {
      {"sigma1", FormatScalarFull(sigma1)},
      {"n1", std::to_string(n1)},
      {"tau1", FormatScalarFull(tau1)},
      {"n2", std::to_string(n2)},
      {"tau2", FormatScalarFull(tau2)},
      {"sigma2", FormatScalarFull(sigma2)},
      {"alpha1", FormatScalarFull(alpha1)},
      {"alpha2", FormatScalarFull(alpha2)},
      {"n3", std::to_string(n3)},
      {"tau3", FormatScalarFull(tau3)},
      {"omega_half", std::to_string(omega_half)},
      {"baseline_d", std::to_string(baseline_d)},
      {"dt", FormatScalarFull(dt)},
      {"renormalize_kernels", renormalize_kernels ? "true" : "false"},
      {"boundary", BoundaryName(boundary)},
  };
}

Image TemporalStreamFilter::Push(const Image& x) {
  const int length = kernel_.length();
  if (length < 1) throw ContractError("temporal filter has an empty kernel");
  if (ring_.empty()) ring_.resize(length);
  const int idx = next_;
  ring_[idx] = x;
  filled_ = std::min(filled_ + 1, length);
  next_ = (idx + 1) % length;

  Image y = kernel_.taps[0] * x;
  for (int j = 1; j < filled_; ++j) {
    y += kernel_.taps[j] * ring_[(idx - j + length) % length];
  }
  return y;
}

void TemporalStreamFilter::Reset() {
  ring_.clear();
  next_ = 0;
  filled_ = 0;
}

Image RetinaStage(const Image& frame, const SpatialKernel& kernel,
                  Boundary boundary) {
  if (frame.rows() < 1 || frame.cols() < 1) {
    throw ShapeError("retina stage: empty frame");
  }
  return ConvolveSame(frame, kernel, boundary);
}

ChannelPair SplitOnOff(const Image& laterally_inhibited, Scalar timestamp) {
  ChannelPair p;
  p.on = (laterally_inhibited.abs() + laterally_inhibited) * 0.5;
  p.off = (laterally_inhibited.abs() - laterally_inhibited) * 0.5;
  p.timestamp = timestamp;
  return p;
}

Image MaxOperation(const Image& field, int omega_half, Boundary boundary) {
  if ((field < 0).any()) {
    throw ContractError("max operation requires a nonnegative field");
  }
  const Image window_max = SlidingWindowMax(field, omega_half, boundary);
  return (field == window_max)
      .select(field, Image::Zero(field.rows(), field.cols()));
}

}  // namespace tqd
