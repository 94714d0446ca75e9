#include "tqd/types.h"

#include <cmath>
#include <numbers>

namespace tqd {

namespace {
constexpr Scalar kPi = std::numbers::pi;
}

std::string BoundaryName(Boundary b) {
  return b == Boundary::kReplicate ? "replicate" : "toroidal";
}

Boundary BoundaryFromName(const std::string& name) {
  if (name == "replicate") return Boundary::kReplicate;
  if (name == "toroidal") return Boundary::kToroidal;
  throw InvalidParameterError("unknown boundary mode '" + name +
                              "' (expected replicate or toroidal)");
}

Scalar ThetaRadians(Direction d) {
  return static_cast<int>(d) * (kPi / 2.0);
}

std::string DirectionName(Direction d) {
  switch (d) {
    case Direction::kRight: return "right";
    case Direction::kUp: return "up";
    case Direction::kLeft: return "left";
    case Direction::kDown: return "down";
  }
  throw InvalidParameterError("invalid direction value");
}

Direction DirectionFromName(const std::string& name) {
  for (int i = 0; i < kNumDirections; ++i) {
    if (name == DirectionName(static_cast<Direction>(i))) {
      return static_cast<Direction>(i);
    }
  }
  throw InvalidParameterError("unknown direction '" + name +
                              "' (expected right, up, left or down)");
}

Direction DirectionFromRadians(Scalar theta) {
  for (int i = 0; i < kNumDirections; ++i) {
    if (std::abs(theta - i * (kPi / 2.0)) < 1e-6) {
      return static_cast<Direction>(i);
    }
  }
  throw FormatError("direction angle " + std::to_string(theta) +
                    " is not one of the four cardinal values");
}

}  // namespace tqd
