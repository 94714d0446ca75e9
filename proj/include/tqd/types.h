#ifndef TQD_TYPES_H_
#define TQD_TYPES_H_

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace tqd {

using Scalar = double;

// Dense 2D luminance / response field. Row-major so a pixel row is
// contiguous in memory, matching the image file layout.
using Image =
    Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

// Boundary handling for spatial convolutions and sliding-window maxima.
enum class Boundary { kReplicate, kToroidal };

std::string BoundaryName(Boundary b);
Boundary BoundaryFromName(const std::string& name);

// The four cardinal motion directions, indexed in argmax priority order.
// theta = 0 is rightward, pi/2 upward (towards row 0), pi leftward,
// 3*pi/2 downward.
enum class Direction : int { kRight = 0, kUp = 1, kLeft = 2, kDown = 3 };

inline constexpr int kNumDirections = 4;

Scalar ThetaRadians(Direction d);
std::string DirectionName(Direction d);
Direction DirectionFromName(const std::string& name);
Direction DirectionFromRadians(Scalar theta);

// Base error carrying a machine-parsable category token; the CLI prints
// "error: <category>: <message>" and exits nonzero.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}
  const std::string& category() const { return category_; }

 private:
  std::string category_;
};

class InvalidParameterError : public Error {
 public:
  explicit InvalidParameterError(const std::string& m)
      : Error("invalid_parameter", m) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& m) : Error("shape", m) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& m) : Error("format", m) {}
};

class SequencingError : public Error {
 public:
  explicit SequencingError(const std::string& m) : Error("sequencing", m) {}
};

class ContractError : public Error {
 public:
  explicit ContractError(const std::string& m) : Error("contract", m) {}
};

class WarmupError : public Error {
 public:
  explicit WarmupError(const std::string& m) : Error("warmup", m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error("io", m) {}
};

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace tqd

#endif  // TQD_TYPES_H_
