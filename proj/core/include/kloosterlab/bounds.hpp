#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kloosterlab {

// Uniform record for every inequality check: what was observed, what the
// bound evaluates to (all unspecified constants set to 1), and their ratio.
struct BoundReport {
  std::string label;
  double observed = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  std::vector<std::pair<std::string, double>> params;
};

// observed/bound, with +infinity as the sentinel for bound = 0 < observed.
double bound_ratio(double observed, double bound);

// The Burgess-shaped short-interval bound N^{1-1/r} p^{(r+1)/(4r^2)} log p
// (natural log) that governs every short-interval error term here.
double omega_r(std::uint64_t p, std::uint64_t n, unsigned r);

// The r in [1, r_max] minimizing omega_r(p, n, r).
unsigned omega_r_star(std::uint64_t p, std::uint64_t n, unsigned r_max = 8);

double weil_bound(std::uint64_t p);                  // 2 sqrt(p)
double katz_bound(std::uint64_t p, unsigned k);      // (k+1)/2 sqrt(p), full-period U_k sum

// Multi-linear sum bounds: prod (k_i+1) sqrt(p) when the linear polynomials
// are pairwise distinct, prod (k_i+1)^2 sqrt(p) under the weaker grouped
// hypothesis.
double multilinear_distinct_bound(std::uint64_t p, std::span<const unsigned> orders);
double multilinear_grouped_bound(std::uint64_t p, std::span<const unsigned> orders);

// Sliding-window 2r-th moment bounds:
//   moment:     k^{2r} h^r p + k^{4r} h^{2r} sqrt(p)
//   max_moment: k^2 h p log(2h)^2 + k^4 h^2 sqrt(p) for r = 1, else as moment
struct WindowMomentBounds {
  double moment;
  double max_moment;
};
WindowMomentBounds window_moment_bounds(std::uint64_t p, std::uint64_t h, unsigned r, unsigned k);

// Partitioned maximal 2r-th moment bound:
//   r = 1:  k^2 p log(2h)^2 + k^4 h sqrt(p)
//   r >= 2: k^{2r} h^{r-1} p + k^{4r} h^{2r-1} sqrt(p)
double partition_max_moment_bound(std::uint64_t p, std::uint64_t h, unsigned r, unsigned k);

}  // namespace kloosterlab
