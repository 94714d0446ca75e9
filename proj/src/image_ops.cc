#include "tqd/image_ops.h"

#include <algorithm>
#include <vector>

namespace tqd {

namespace {

inline int WrapIndex(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

inline int ClampIndex(int i, int n) { return std::clamp(i, 0, n - 1); }

inline int MapIndex(int i, int n, Boundary b) {
  return b == Boundary::kToroidal ? WrapIndex(i, n) : ClampIndex(i, n);
}

struct Tap {
  int di;
  int dj;
  Scalar w;
};

std::vector<Tap> NonZeroTaps(const SpatialKernel& k) {
  std::vector<Tap> taps;
  taps.reserve(static_cast<size_t>(k.side()) * k.side());
  for (int di = -k.radius; di <= k.radius; ++di) {
    for (int dj = -k.radius; dj <= k.radius; ++dj) {
      const Scalar w = k.taps(di + k.radius, dj + k.radius);
      if (w != 0.0) taps.push_back({di, dj, w});
    }
  }
  return taps;
}

}  // namespace

Image PadImage(const Image& in, int radius, Boundary boundary) {
  const int rows = static_cast<int>(in.rows());
  const int cols = static_cast<int>(in.cols());
  if (rows == 0 || cols == 0) throw ShapeError("cannot pad an empty image");
  std::vector<int> rmap(rows + 2 * radius), cmap(cols + 2 * radius);
  for (int r = 0; r < rows + 2 * radius; ++r) {
    rmap[r] = MapIndex(r - radius, rows, boundary);
  }
  for (int c = 0; c < cols + 2 * radius; ++c) {
    cmap[c] = MapIndex(c - radius, cols, boundary);
  }
  Image out(rows + 2 * radius, cols + 2 * radius);
  for (int r = 0; r < rows + 2 * radius; ++r) {
    for (int c = 0; c < cols + 2 * radius; ++c) {
      out(r, c) = in(rmap[r], cmap[c]);
    }
  }
  return out;
}

Image ConvolveSame(const Image& in, const SpatialKernel& kernel,
                   Boundary boundary) {
  const int rows = static_cast<int>(in.rows());
  const int cols = static_cast<int>(in.cols());
  const int radius = kernel.radius;
  const Image padded = PadImage(in, radius, boundary);
  const std::vector<Tap> taps = NonZeroTaps(kernel);

  Image out(rows, cols);
  Eigen::Array<Scalar, 1, Eigen::Dynamic> acc(cols);
  for (int r = 0; r < rows; ++r) {
    acc.setZero();
    for (const Tap& t : taps) {
      acc += t.w * padded.row(r + radius + t.di).segment(radius + t.dj, cols);
    }
    out.row(r) = acc;
  }
  return out;
}

Image SampleShifted(const Image& in, int row_offset, int col_offset,
                    Boundary boundary) {
  const int rows = static_cast<int>(in.rows());
  const int cols = static_cast<int>(in.cols());
  std::vector<int> cmap(cols);
  for (int c = 0; c < cols; ++c) {
    cmap[c] = MapIndex(c + col_offset, cols, boundary);
  }
  Image out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const int sr = MapIndex(r + row_offset, rows, boundary);
    for (int c = 0; c < cols; ++c) out(r, c) = in(sr, cmap[c]);
  }
  return out;
}

Image SlidingWindowMax(const Image& in, int half_width, Boundary boundary) {
  if (half_width < 1) {
    throw InvalidParameterError("sliding max: half width must be >= 1");
  }
  const int rows = static_cast<int>(in.rows());
  const int cols = static_cast<int>(in.cols());
  const int side = 2 * half_width + 1;
  const Image padded = PadImage(in, half_width, boundary);

  // Horizontal pass over all padded rows, then vertical pass.
  Image row_max(rows + 2 * half_width, cols);
  for (int r = 0; r < rows + 2 * half_width; ++r) {
    for (int c = 0; c < cols; ++c) {
      Scalar m = padded(r, c);
      for (int k = 1; k < side; ++k) m = std::max(m, padded(r, c + k));
      row_max(r, c) = m;
    }
  }
  Image out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Scalar m = row_max(r, c);
      for (int k = 1; k < side; ++k) m = std::max(m, row_max(r + k, c));
      out(r, c) = m;
    }
  }
  return out;
}

}  // namespace tqd
