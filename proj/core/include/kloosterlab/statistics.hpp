#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "kloosterlab/bounds.hpp"
#include "kloosterlab/kloosterman.hpp"

namespace kloosterlab {

// Half-open integer range (start, start + length]. May wrap any number of
// times around a period; indices reduce mod p with the a = 0 hits counted
// explicitly rather than silently skipped.
struct IntervalSpec {
  std::int64_t start = 0;
  std::uint64_t length = 0;
};

// ---- interval sums of U_k over angle values ----

struct IntervalSumResult {
  double value = 0.0;
  std::uint64_t zero_index_hits = 0;  // how many a = 0 (mod p) the scan met
};

// sum over a in (M, M+N] of U_k(cos theta_p(h a)). Base table must have b=1.
IntervalSumResult interval_sum(const KloostermanTable& table, std::int64_t h, IntervalSpec iv,
                               unsigned k);

struct TwistedSumResult {
  std::complex<double> value{0.0, 0.0};
  std::uint64_t zero_index_hits = 0;
};

// sum over a in (M, M+N] of U_k(cos theta_p(h a)) e(m a / p).
TwistedSumResult twisted_interval_sum(const KloostermanTable& table, std::int64_t h,
                                      IntervalSpec iv, std::int64_t m, unsigned k);

// |sum over a = 1..p-1 of U_k(cos theta_p(a))| against (k+1)/2 sqrt(p).
BoundReport full_period_sum(const KloostermanTable& table, unsigned k);

// Largest |interval_sum| over twists h: exhaustive over h = 1..p-1 for
// p <= 2003, otherwise over `samples` seeded random twists.
struct MaxTwistResult {
  double max_abs = 0.0;
  std::uint64_t argmax_h = 1;
  bool exhaustive = false;
};
MaxTwistResult max_interval_sum_over_twists(const KloostermanTable& table, IntervalSpec iv,
                                            unsigned k, unsigned samples = 256,
                                            std::uint64_t seed = 1);

// ---- moments ----

struct MomentReport {
  double observed = 0.0;
  double main_term = 0.0;
  double ratio = 0.0;        // observed/main_term, +inf sentinel when main_term = 0
  double error = 0.0;        // observed - main_term
  double error_scale = 0.0;  // p^{alpha/2} * omega_{r*}(p, N)
  std::uint64_t zero_index_hits = 0;
};

// Gamma(alpha+1) / (Gamma(alpha/2+2) Gamma(alpha/2+1)): the moment constant.
double moment_main_coefficient(double alpha);

// sum S(a,h;p)^alpha over the interval (integer alpha; the main term carries
// the parity factor (1+(-1)^alpha)/2).
MomentReport signed_moment(const KloostermanTable& table, std::int64_t h, IntervalSpec iv,
                           unsigned alpha);

// sum |S(a,h;p)|^alpha over the interval, any real alpha > 0.
MomentReport abs_moment(const KloostermanTable& table, std::int64_t h, IntervalSpec iv,
                        double alpha);

// ---- counting statistics ----

struct CountReport {
  std::uint64_t observed = 0;
  double main_term = 0.0;
  double error = 0.0;            // observed - main_term
  std::uint64_t zero_bucket = 0; // entries excluded from observed
};

struct SignCountReport {
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
  std::uint64_t zero_bucket = 0;  // |S| <= 1e-9 sqrt(p) plus the a = 0 hits
  double main_term = 0.0;         // N/2 for each sign
};

// Signs of S(a,h;p) over the interval; positives + negatives + zero_bucket = N.
SignCountReport sign_count(const KloostermanTable& table, std::int64_t h, IntervalSpec iv);

// #{a in interval : |S(a,h;p)| <= 2 delta sqrt(p)}, compared against
// (2/pi)(arcsin delta + delta sqrt(1-delta^2)) N. All residues count.
CountReport small_value_count(const KloostermanTable& table, std::int64_t h, IntervalSpec iv,
                              double delta);

// #{a : |S(a,h;p)| >= 2 delta sqrt(p)} against (2/pi)(arccos delta - delta
// sqrt(1-delta^2)) N.
CountReport large_value_count(const KloostermanTable& table, std::int64_t h, IntervalSpec iv,
                              double delta);

// Sato-Tate mass of [alpha, beta]: (2/pi) int sin^2 u du, 0 <= alpha <= beta <= pi.
double sato_tate_cdf(double alpha, double beta);

// sup over a 4096-point grid t in [0, pi] of |empirical CDF of the interval's
// angles at t - sato_tate_cdf(0, t)|.
double empirical_cdf_discrepancy(const KloostermanTable& table, std::int64_t h, IntervalSpec iv,
                                 std::size_t grid = 4096);

// ---- multi-linear sums ----

struct MultiSumSpec {
  struct Poly {
    std::int64_t scale = 1;   // a_i, nonzero mod p
    std::int64_t offset = 0;  // b_i
  };
  std::vector<Poly> polys;
  std::vector<unsigned> orders;  // k_i, same length as polys
  std::int64_t twist = 0;        // additive twist h in e(h a / p)
};

struct MultiSumReport {
  std::complex<double> value{0.0, 0.0};
  std::uint64_t excluded = 0;  // residues a with prod f_i(a) = 0 mod p
  bool distinct_applies = false;
  bool grouped_applies = false;
  BoundReport distinct;  // against prod (k_i+1)   sqrt(p)
  BoundReport grouped;   // against prod (k_i+1)^2 sqrt(p)
};

// Full-period sum over a mod p (excluding zeros of the polynomials) of
// prod_i U_{k_i}(cos theta_p(f_i(a))) e(twist a / p), f_i(x) = scale_i x + offset_i.
MultiSumReport multilinear_sum(const KloostermanTable& table, const MultiSumSpec& spec);

// ---- sliding-window moments ----

struct WindowMomentSpec {
  std::uint64_t window = 1;     // h, in [1, p]
  unsigned order = 1;           // r (the moment is 2r-th)
  std::int64_t multiplier = 1;  // m, with p not dividing m
  unsigned cheb_order = 1;      // k
};

// sum over a = 1..p of |sum_{a < n <= a+h} U_k(cos theta_p(m n))|^{2r}.
double window_moment(const KloostermanTable& table, const WindowMomentSpec& spec);

// Same with max over window lengths h' < h inside; zero when h = 1.
double window_max_moment(const KloostermanTable& table, const WindowMomentSpec& spec);

// sum over intervals I_t of max over a (1..p-1, exhaustive for p <= 2003,
// else 64 seeded samples) of |sum_{m in I_t} U_k(cos theta_p(a m))|^{2r}.
// Intervals must be disjoint, lie in [0, p), and have h < #I_t <= 2h.
BoundReport partition_max_moment(const KloostermanTable& table,
                                 std::span<const IntervalSpec> intervals, std::uint64_t h,
                                 unsigned r, unsigned k, std::uint64_t seed = 1);

// ---- horizontal scans over primes in (x, 2x] ----

struct HorizontalReport {
  double u_sum = 0.0;                // double sum of U_k(cos theta_p(a)), p not dividing a
  std::uint64_t positive_pairs = 0;  // (a, p) pairs with S(a,h;p) > 0
  std::uint64_t negative_pairs = 0;
  std::uint64_t zero_pairs = 0;
  double sign_main_term = 0.0;       // N (pi(2x) - pi(x)) / 2
  std::uint64_t prime_count = 0;
};

HorizontalReport horizontal_scan(IntervalSpec iv, std::uint64_t x, std::int64_t h, unsigned k,
                                 unsigned threads = 0);

}  // namespace kloosterlab
