#pragma once

#include <cmath>
#include <cstdint>

namespace resamp {

// Two-sided 99% normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

struct Interval {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double half_width = 0.0;
};

// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(uint64_t successes, uint64_t trials, double z = kZ99) {
  Interval out;
  if (trials == 0) {
    out.lo = 0.0;
    out.hi = 1.0;
    out.half_width = 0.5;
    out.estimate = 0.0;
    return out;
  }
  double n = static_cast<double>(trials);
  double phat = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (phat + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  out.estimate = phat;
  out.lo = center - half;
  out.hi = center + half;
  if (out.lo < 0.0) out.lo = 0.0;
  if (out.hi > 1.0) out.hi = 1.0;
  out.half_width = half;
  return out;
}

// Streaming mean and sample variance.
struct RunningMean {
  uint64_t count = 0;
  double sum = 0.0;
  double sumsq = 0.0;

  void add(double x) {
    ++count;
    sum += x;
    sumsq += x * x;
  }

  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }

  double sample_variance() const {
    if (count < 2) return 0.0;
    double n = static_cast<double>(count);
    double v = (sumsq - sum * sum / n) / (n - 1.0);
    return v > 0.0 ? v : 0.0;
  }

  double std_error() const {
    return count ? std::sqrt(sample_variance() / static_cast<double>(count)) : 0.0;
  }

  Interval interval(double z = kZ99) const {
    Interval out;
    out.estimate = mean();
    out.half_width = z * std_error();
    out.lo = out.estimate - out.half_width;
    out.hi = out.estimate + out.half_width;
    return out;
  }
};

}  // namespace resamp
