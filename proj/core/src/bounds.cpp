#include "kloosterlab/bounds.hpp"

#include <cmath>
#include <limits>

namespace kloosterlab {

double bound_ratio(double observed, double bound) {
  if (bound > 0.0) return observed / bound;
  if (observed == 0.0) return 0.0;
  return std::numeric_limits<double>::infinity();
}

double omega_r(std::uint64_t p, std::uint64_t n, unsigned r) {
  const double pd = static_cast<double>(p);
  const double nd = static_cast<double>(n);
  const double rd = static_cast<double>(r);
  return std::pow(nd, 1.0 - 1.0 / rd) * std::pow(pd, (rd + 1.0) / (4.0 * rd * rd)) * std::log(pd);
}

unsigned omega_r_star(std::uint64_t p, std::uint64_t n, unsigned r_max) {
  unsigned best = 1;
  double best_value = omega_r(p, n, 1);
  for (unsigned r = 2; r <= r_max; ++r) {
    const double v = omega_r(p, n, r);
    if (v < best_value) {
      best_value = v;
      best = r;
    }
  }
  return best;
}

double weil_bound(std::uint64_t p) { return 2.0 * std::sqrt(static_cast<double>(p)); }

double katz_bound(std::uint64_t p, unsigned k) {
  return 0.5 * (k + 1.0) * std::sqrt(static_cast<double>(p));
}

double multilinear_distinct_bound(std::uint64_t p, std::span<const unsigned> orders) {
  double prod = 1.0;
  for (unsigned k : orders) prod *= k + 1.0;
  return prod * std::sqrt(static_cast<double>(p));
}

double multilinear_grouped_bound(std::uint64_t p, std::span<const unsigned> orders) {
  double prod = 1.0;
  for (unsigned k : orders) prod *= (k + 1.0) * (k + 1.0);
  return prod * std::sqrt(static_cast<double>(p));
}

WindowMomentBounds window_moment_bounds(std::uint64_t p, std::uint64_t h, unsigned r,
                                        unsigned k) {
  const double pd = static_cast<double>(p);
  const double hd = static_cast<double>(h);
  const double kd = static_cast<double>(k);
  const double sqrt_p = std::sqrt(pd);
  const double moment =
      std::pow(kd, 2.0 * r) * std::pow(hd, r) * pd + std::pow(kd, 4.0 * r) * std::pow(hd, 2.0 * r) * sqrt_p;
  double max_moment = moment;
  if (r == 1) {
    const double log2h = std::log(2.0 * hd);
    max_moment = kd * kd * hd * pd * log2h * log2h + std::pow(kd, 4.0) * hd * hd * sqrt_p;
  }
  return {moment, max_moment};
}

double partition_max_moment_bound(std::uint64_t p, std::uint64_t h, unsigned r, unsigned k) {
  const double pd = static_cast<double>(p);
  const double hd = static_cast<double>(h);
  const double kd = static_cast<double>(k);
  const double sqrt_p = std::sqrt(pd);
  if (r == 1) {
    const double log2h = std::log(2.0 * hd);
    return kd * kd * pd * log2h * log2h + std::pow(kd, 4.0) * hd * sqrt_p;
  }
  return std::pow(kd, 2.0 * r) * std::pow(hd, r - 1.0) * pd +
         std::pow(kd, 4.0 * r) * std::pow(hd, 2.0 * r - 1.0) * sqrt_p;
}

}  // namespace kloosterlab
