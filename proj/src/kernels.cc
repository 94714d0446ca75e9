#include "tqd/kernels.h"

#include <cmath>
#include <numbers>

namespace tqd {

namespace {

int TapCountForHorizon(Scalar horizon, Scalar dt) {
  // length * dt >= horizon; allow for round-off in horizon/dt.
  int n = static_cast<int>(std::ceil(horizon / dt - 1e-9));
  return std::max(n, 1);
}

}  // namespace

Scalar DefaultGammaHorizon(int order, Scalar tau) {
  // 5x the kernel mean tau*(n+1)/n.
  return 5.0 * tau * (order + 1) / order;
}

Scalar DefaultExponentialHorizon(Scalar alpha) { return 5.0 * alpha; }

int DefaultGaussianRadius(Scalar sigma) {
  return std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
}

SpatialKernel MakeGaussianKernel(Scalar sigma, int radius, bool renormalize) {
  if (!(sigma > 0)) {
    throw InvalidParameterError("gaussian kernel: sigma must be > 0");
  }
  if (radius < 1) {
    throw InvalidParameterError("gaussian kernel: radius must be >= 1");
  }
  SpatialKernel k;
  k.radius = radius;
  k.taps.resize(2 * radius + 1, 2 * radius + 1);
  const Scalar norm = 1.0 / (2.0 * std::numbers::pi * sigma * sigma);
  const Scalar inv2s2 = 1.0 / (2.0 * sigma * sigma);
  for (int i = -radius; i <= radius; ++i) {
    for (int j = -radius; j <= radius; ++j) {
      k.taps(i + radius, j + radius) =
          norm * std::exp(-(Scalar(i) * i + Scalar(j) * j) * inv2s2);
    }
  }
  if (renormalize) k.taps /= k.taps.sum();
  return k;
}

Scalar GammaFilterValue(int order, Scalar tau, Scalar t) {
  const Scalar n = order;
  return std::pow(n * t, n) * std::exp(-n * t / tau) /
         (std::tgamma(n) * std::pow(tau, n + 1));
}

TemporalKernel MakeGammaKernel(int order, Scalar tau, Scalar dt,
                               Scalar horizon, bool renormalize) {
  if (order < 1) {
    throw InvalidParameterError("gamma kernel: order must be >= 1");
  }
  if (!(tau > 0) || !(dt > 0)) {
    throw InvalidParameterError("gamma kernel: tau and dt must be > 0");
  }
  if (horizon <= 0) horizon = DefaultGammaHorizon(order, tau);
  TemporalKernel k;
  k.dt = dt;
  const int n = TapCountForHorizon(horizon, dt);
  k.taps.resize(n);
  for (int i = 0; i < n; ++i) {
    k.taps[i] = dt * GammaFilterValue(order, tau, i * dt);
  }
  if (renormalize) k.taps /= k.taps.sum();
  return k;
}

TemporalKernel MakeHighpassKernel(int n1, Scalar tau1, int n2, Scalar tau2,
                                  Scalar dt, bool renormalize) {
  if (n1 == n2 && tau1 == tau2) {
    throw InvalidParameterError(
        "highpass kernel: the two gamma components must differ");
  }
  TemporalKernel fast = MakeGammaKernel(n1, tau1, dt, 0, renormalize);
  TemporalKernel slow = MakeGammaKernel(n2, tau2, dt, 0, renormalize);
  TemporalKernel k;
  k.dt = dt;
  const int n = std::max(fast.length(), slow.length());
  k.taps = Vector::Zero(n);
  k.taps.head(fast.length()) += fast.taps;
  k.taps.head(slow.length()) -= slow.taps;
  return k;
}

TemporalKernel MakeExponentialKernel(Scalar alpha, Scalar dt, Scalar horizon,
                                     bool renormalize) {
  if (!(alpha > 0) || !(dt > 0)) {
    throw InvalidParameterError(
        "exponential kernel: alpha and dt must be > 0");
  }
  if (horizon <= 0) horizon = DefaultExponentialHorizon(alpha);
  TemporalKernel k;
  k.dt = dt;
  const int n = TapCountForHorizon(horizon, dt);
  k.taps.resize(n);
  const Scalar half = dt / (2.0 * alpha);
  k.taps[0] = 1.0 - std::exp(-half);
  const Scalar cell = std::exp(half) - std::exp(-half);
  for (int i = 1; i < n; ++i) {
    k.taps[i] = std::exp(-i * dt / alpha) * cell;
  }
  if (renormalize) k.taps /= k.taps.sum();
  return k;
}

SpaceTimeKernel MakeInhibitionKernel(Scalar sigma2, Scalar alpha1,
                                     Scalar alpha2, int radius, Scalar horizon,
                                     Scalar dt, bool renormalize) {
  if (!(sigma2 > 0)) {
    throw InvalidParameterError("inhibition kernel: sigma2 must be > 0");
  }
  if (!(alpha1 > 0) || !(alpha2 > alpha1)) {
    throw InvalidParameterError(
        "inhibition kernel: requires alpha2 > alpha1 > 0");
  }
  const Scalar sigma3 = 2.0 * sigma2;
  if (radius <= 0) radius = DefaultGaussianRadius(sigma3);
  if (horizon <= 0) horizon = DefaultExponentialHorizon(alpha2);

  const SpatialKernel center = MakeGaussianKernel(sigma2, radius, renormalize);
  const SpatialKernel surround =
      MakeGaussianKernel(sigma3, radius, renormalize);
  const Image dog = center.taps - surround.taps;

  SpaceTimeKernel w;
  w.terms.resize(2);
  w.terms[0].spatial = {dog.max(Scalar(0)), radius};
  w.terms[0].temporal = MakeExponentialKernel(alpha1, dt, horizon, renormalize);
  w.terms[1].spatial = {dog.min(Scalar(0)), radius};
  w.terms[1].temporal = MakeExponentialKernel(alpha2, dt, horizon, renormalize);
  return w;
}

}  // namespace tqd
