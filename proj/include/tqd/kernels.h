#ifndef TQD_KERNELS_H_
#define TQD_KERNELS_H_

#include <utility>
#include <vector>

#include "tqd/types.h"

namespace tqd {

// Discretized 2D kernel on a square (2*radius+1)^2 grid of integer pixel
// offsets; tap (radius, radius) is the (0,0) sample.
struct SpatialKernel {
  Image taps;
  int radius = 0;

  int side() const { return 2 * radius + 1; }
  int center() const { return radius; }
  Scalar sum() const { return taps.sum(); }
};

// Discretized causal 1D kernel; taps[k] weights the input k steps in the
// past (tap 0 is time 0).
struct TemporalKernel {
  Vector taps;
  Scalar dt = 0;

  int length() const { return static_cast<int>(taps.size()); }
  Scalar sum() const { return taps.sum(); }
};

// Separable space-time kernel: a sum of (spatial, temporal) product terms.
struct SpaceTimeKernel {
  struct Term {
    SpatialKernel spatial;
    TemporalKernel temporal;
  };
  std::vector<Term> terms;
};

// Truncation defaults. Gamma kernels are cut at five mean lifetimes,
// exponentials at five time constants; tails there are below 1% of peak.
Scalar DefaultGammaHorizon(int order, Scalar tau);
Scalar DefaultExponentialHorizon(Scalar alpha);
int DefaultGaussianRadius(Scalar sigma);  // ceil(4*sigma)

// Normalized isotropic Gaussian, point-sampled at integer offsets:
// taps(i,j) = exp(-(di^2+dj^2)/(2 sigma^2)) / (2 pi sigma^2).
SpatialKernel MakeGaussianKernel(Scalar sigma, int radius,
                                 bool renormalize = false);

// Gamma filter value (nt)^n exp(-nt/tau) / ((n-1)! tau^(n+1)) at time t.
Scalar GammaFilterValue(int order, Scalar tau, Scalar t);

// Causal gamma kernel, taps[k] = dt * GammaFilterValue(order, tau, k*dt).
// horizon <= 0 selects DefaultGammaHorizon.
TemporalKernel MakeGammaKernel(int order, Scalar tau, Scalar dt,
                               Scalar horizon = 0, bool renormalize = false);

// Band-pass (temporal contrast) kernel: difference of two gamma kernels,
// padded to the longer of the two.
TemporalKernel MakeHighpassKernel(int n1, Scalar tau1, int n2, Scalar tau2,
                                  Scalar dt, bool renormalize = false);

// Unit-mass exponential low-pass exp(-t/alpha)/alpha. Taps integrate the
// density over each sample cell [k*dt - dt/2, k*dt + dt/2] (half cell at
// k = 0), so the infinite-horizon tap sum is exactly 1; point sampling at
// these time constants would inflate the mass by up to ~18%.
TemporalKernel MakeExponentialKernel(Scalar alpha, Scalar dt,
                                     Scalar horizon = 0,
                                     bool renormalize = false);

// Center-surround lateral-inhibition kernel:
//   term 0: [G_sigma2 - G_(2 sigma2)]^+  paired with  exp(-t/alpha1)/alpha1
//   term 1: [G_sigma2 - G_(2 sigma2)]^-  paired with  exp(-t/alpha2)/alpha2
// radius <= 0 selects ceil(4 * 2*sigma2); horizon <= 0 selects
// 5 * max(alpha1, alpha2). Requires alpha2 > alpha1.
SpaceTimeKernel MakeInhibitionKernel(Scalar sigma2, Scalar alpha1,
                                     Scalar alpha2, int radius, Scalar horizon,
                                     Scalar dt, bool renormalize = false);

}  // namespace tqd

#endif  // TQD_KERNELS_H_
