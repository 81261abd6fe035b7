#include "kloosterlab/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kloosterlab/errors.hpp"
#include "kloosterlab/parallel.hpp"
#include "kloosterlab/rng.hpp"

namespace kloosterlab {

namespace {

constexpr std::uint64_t kExhaustiveTwistLimit = 2003;   // full h sweeps below this
constexpr std::uint64_t kMultiSumLimit = 1000000;        // O(s*p) brute force cap
constexpr std::uint64_t kWindowWorkLimit = 100000000;    // p*h cap for window moments
constexpr unsigned kPartitionSamples = 64;

// U_k(x) for x already inside [-1, 1]; recurrence, no domain check.
double u_fast(unsigned k, double x) {
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (unsigned j = 1; j < k; ++j) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double pow_2r(double w, unsigned r) {
  const double w2 = w * w;
  double out = 1.0;
  for (unsigned i = 0; i < r; ++i) out *= w2;
  return out;
}

// Read access to S(a*h, 1; p) for a b=1 table and a fixed twist h.
struct TwistView {
  const KloostermanTable* table;
  std::uint64_t p;
  std::uint64_t h;

  TwistView(const KloostermanTable& t, std::int64_t h_raw, const char* who)
      : table(&t), p(t.p.value()), h(reduce_mod(h_raw, t.p.value())) {
    if (t.b != 1)
      throw std::invalid_argument(std::string(who) + ": base table must have twist b = 1");
    if (h == 0) throw std::domain_error(std::string(who) + ": twist h is divisible by p");
    if (t.values.size() != p)
      throw std::invalid_argument(std::string(who) + ": malformed table");
  }

  std::uint64_t slot(std::uint64_t reduced) const { return (reduced * h) % p; }
  double s(std::uint64_t reduced) const { return table->values[slot(reduced)]; }
  double cos_ratio(std::uint64_t reduced) const { return table->cos_ratio(slot(reduced)); }
};

// Calls fn(a mod p) for each a in (start, start + length].
template <typename Fn>
void scan_interval(std::uint64_t p, IntervalSpec iv, Fn&& fn) {
  std::uint64_t r = reduce_mod(iv.start, p);
  for (std::uint64_t i = 0; i < iv.length; ++i) {
    ++r;
    if (r >= p) r -= p;
    fn(r);
  }
}

}  // namespace

IntervalSumResult interval_sum(const KloostermanTable& table, std::int64_t h, IntervalSpec iv,
                               unsigned k) {
  TwistView view(table, h, "interval_sum");
  IntervalSumResult out;
  scan_interval(view.p, iv, [&](std::uint64_t r) {
    if (r == 0) ++out.zero_index_hits;
    out.value += u_fast(k, view.cos_ratio(r));
  });
  return out;
}

TwistedSumResult twisted_interval_sum(const KloostermanTable& table, std::int64_t h,
                                      IntervalSpec iv, std::int64_t m, unsigned k) {
  TwistView view(table, h, "twisted_interval_sum");
  const std::uint64_t p = view.p;
  const std::uint64_t mr = reduce_mod(m, p);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(p);
  TwistedSumResult out;
  std::uint64_t phase_idx = reduce_mod(iv.start, p) * mr % p;
  scan_interval(p, iv, [&](std::uint64_t r) {
    phase_idx += mr;
    if (phase_idx >= p) phase_idx -= p;
    if (r == 0) ++out.zero_index_hits;
    const double term = u_fast(k, view.cos_ratio(r));
    out.value += term * std::polar(1.0, step * static_cast<double>(phase_idx));
  });
  return out;
}

BoundReport full_period_sum(const KloostermanTable& table, unsigned k) {
  const std::uint64_t p = table.p.value();
  double sum = 0.0;
  for (std::uint64_t a = 1; a < p; ++a) sum += u_fast(k, table.cos_ratio(a));
  BoundReport report;
  report.label = "vst";
  report.observed = std::fabs(sum);
  report.bound = katz_bound(p, k);
  report.ratio = bound_ratio(report.observed, report.bound);
  report.params = {{"p", static_cast<double>(p)}, {"k", static_cast<double>(k)}};
  return report;
}

MaxTwistResult max_interval_sum_over_twists(const KloostermanTable& table, IntervalSpec iv,
                                            unsigned k, unsigned samples, std::uint64_t seed) {
  const std::uint64_t p = table.p.value();
  MaxTwistResult out;
  auto consider = [&](std::uint64_t h) {
    const double v = std::fabs(interval_sum(table, static_cast<std::int64_t>(h), iv, k).value);
    if (v > out.max_abs) {
      out.max_abs = v;
      out.argmax_h = h;
    }
  };
  if (p <= kExhaustiveTwistLimit) {
    out.exhaustive = true;
    for (std::uint64_t h = 1; h < p; ++h) consider(h);
  } else {
    SplitMix64 rng(seed);
    for (unsigned i = 0; i < samples; ++i) consider(1 + rng.below(p - 1));
  }
  return out;
}

double moment_main_coefficient(double alpha) {
  return std::exp(std::lgamma(alpha + 1.0) - std::lgamma(alpha / 2.0 + 2.0) -
                  std::lgamma(alpha / 2.0 + 1.0));
}

namespace {

MomentReport finish_moment(double observed, double main, std::uint64_t p, std::uint64_t n,
                           double alpha, std::uint64_t zero_hits) {
  MomentReport report;
  report.observed = observed;
  report.main_term = main;
  report.ratio = bound_ratio(observed, main);
  report.error = observed - main;
  const unsigned r_star = omega_r_star(p, n);
  report.error_scale = std::pow(static_cast<double>(p), alpha / 2.0) * omega_r(p, n, r_star);
  report.zero_index_hits = zero_hits;
  return report;
}

}  // namespace

MomentReport signed_moment(const KloostermanTable& table, std::int64_t h, IntervalSpec iv,
                           unsigned alpha) {
  if (alpha == 0) throw std::domain_error("signed_moment: alpha must be positive");
  TwistView view(table, h, "signed_moment");
  double observed = 0.0;
  std::uint64_t zero_hits = 0;
  scan_interval(view.p, iv, [&](std::uint64_t r) {
    if (r == 0) ++zero_hits;
    const double s = view.s(r);
    double term = s;
    for (unsigned i = 1; i < alpha; ++i) term *= s;
    observed += term;
  });
  const double parity = (alpha % 2 == 0) ? 1.0 : 0.0;  // (1 + (-1)^alpha) / 2
  const double main = parity * moment_main_coefficient(alpha) *
                      static_cast<double>(iv.length) *
                      std::pow(static_cast<double>(view.p), alpha / 2.0);
  return finish_moment(observed, main, view.p, iv.length, alpha, zero_hits);
}

MomentReport abs_moment(const KloostermanTable& table, std::int64_t h, IntervalSpec iv,
                        double alpha) {
  if (!(alpha > 0.0)) throw std::domain_error("abs_moment: alpha must be positive");
  TwistView view(table, h, "abs_moment");
  double observed = 0.0;
  std::uint64_t zero_hits = 0;
  scan_interval(view.p, iv, [&](std::uint64_t r) {
    if (r == 0) ++zero_hits;
    observed += std::pow(std::fabs(view.s(r)), alpha);
  });
  const double main = moment_main_coefficient(alpha) * static_cast<double>(iv.length) *
                      std::pow(static_cast<double>(view.p), alpha / 2.0);
  return finish_moment(observed, main, view.p, iv.length, alpha, zero_hits);
}

SignCountReport sign_count(const KloostermanTable& table, std::int64_t h, IntervalSpec iv) {
  TwistView view(table, h, "sign_count");
  const double tol = zero_tolerance(view.p);
  SignCountReport report;
  scan_interval(view.p, iv, [&](std::uint64_t r) {
    if (r == 0) {
      ++report.zero_bucket;
      return;
    }
    const double s = view.s(r);
    if (std::fabs(s) <= tol)
      ++report.zero_bucket;
    else if (s > 0.0)
      ++report.positives;
    else
      ++report.negatives;
  });
  report.main_term = static_cast<double>(iv.length) / 2.0;
  return report;
}

namespace {

CountReport extreme_count(const KloostermanTable& table, std::int64_t h, IntervalSpec iv,
                          double delta, bool small_side) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::domain_error("extreme value count: delta must lie in (0, 1]");
  TwistView view(table, h, small_side ? "small_value_count" : "large_value_count");
  CountReport report;
  scan_interval(view.p, iv, [&](std::uint64_t r) {
    const double x = std::fabs(view.cos_ratio(r));
    const bool hit = small_side ? (x <= delta) : (x >= delta);
    if (hit) ++report.observed;
  });
  const double root = std::sqrt(1.0 - delta * delta);
  const double density =
      small_side ? (2.0 / std::numbers::pi) * (std::asin(delta) + delta * root)
                 : (2.0 / std::numbers::pi) * (std::acos(delta) - delta * root);
  report.main_term = density * static_cast<double>(iv.length);
  report.error = static_cast<double>(report.observed) - report.main_term;
  return report;
}

}  // namespace

CountReport small_value_count(const KloostermanTable& table, std::int64_t h, IntervalSpec iv,
                              double delta) {
  return extreme_count(table, h, iv, delta, true);
}

CountReport large_value_count(const KloostermanTable& table, std::int64_t h, IntervalSpec iv,
                              double delta) {
  return extreme_count(table, h, iv, delta, false);
}

double sato_tate_cdf(double alpha, double beta) {
  if (!(alpha >= 0.0 && alpha <= beta && beta <= std::numbers::pi))
    throw std::domain_error("sato_tate_cdf: need 0 <= alpha <= beta <= pi");
  return (beta - alpha) / std::numbers::pi -
         (std::sin(2.0 * beta) - std::sin(2.0 * alpha)) / (2.0 * std::numbers::pi);
}

double empirical_cdf_discrepancy(const KloostermanTable& table, std::int64_t h, IntervalSpec iv,
                                 std::size_t grid) {
  if (iv.length == 0) throw std::domain_error("empirical_cdf_discrepancy: empty interval");
  if (grid < 2) throw std::domain_error("empirical_cdf_discrepancy: grid too small");
  TwistView view(table, h, "empirical_cdf_discrepancy");

  std::vector<double> angles;
  angles.reserve(iv.length);
  scan_interval(view.p, iv, [&](std::uint64_t r) { angles.push_back(std::acos(view.cos_ratio(r))); });
  std::sort(angles.begin(), angles.end());

  const double n = static_cast<double>(angles.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double t = std::numbers::pi * static_cast<double>(i) / static_cast<double>(grid - 1);
    const auto count = std::upper_bound(angles.begin(), angles.end(), t) - angles.begin();
    const double gap = std::fabs(static_cast<double>(count) / n - sato_tate_cdf(0.0, t));
    worst = std::max(worst, gap);
  }
  return worst;
}

MultiSumReport multilinear_sum(const KloostermanTable& table, const MultiSumSpec& spec) {
  const std::uint64_t p = table.p.value();
  if (table.b != 1)
    throw std::invalid_argument("multilinear_sum: base table must have twist b = 1");
  if (spec.polys.empty() || spec.polys.size() != spec.orders.size())
    throw std::domain_error("multilinear_sum: polynomial and order lists must match and be nonempty");
  if (p > kMultiSumLimit)
    throw CostGuardError("multilinear_sum: brute force refused for p > " +
                         std::to_string(kMultiSumLimit));

  const std::size_t s = spec.polys.size();
  std::vector<std::uint64_t> scale(s), pos(s);
  for (std::size_t i = 0; i < s; ++i) {
    scale[i] = reduce_mod(spec.polys[i].scale, p);
    if (scale[i] == 0)
      throw std::domain_error("multilinear_sum: polynomial " + std::to_string(i) +
                              " is degenerate mod p");
    pos[i] = reduce_mod(spec.polys[i].offset, p);  // f_i(0)
  }
  const std::uint64_t twist = reduce_mod(spec.twist, p);

  // Hypothesis flags for the two bound shapes.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> keys(s);
  for (std::size_t i = 0; i < s; ++i) keys[i] = {scale[i], reduce_mod(spec.polys[i].offset, p)};
  bool all_distinct = true;
  for (std::size_t i = 0; i < s && all_distinct; ++i)
    for (std::size_t j = i + 1; j < s; ++j)
      if (keys[i] == keys[j]) {
        all_distinct = false;
        break;
      }
  bool all_orders_zero = true;
  for (unsigned k : spec.orders)
    if (k != 0) all_orders_zero = false;

  MultiSumReport report;
  report.distinct_applies = all_distinct && !(all_orders_zero && twist == 0);
  if (twist != 0) {
    report.grouped_applies = true;
  } else {
    // Group identical polynomials; the grouped bound needs one group whose
    // total order is odd.
    for (std::size_t i = 0; i < s; ++i) {
      unsigned long long group_order = 0;
      bool representative = true;
      for (std::size_t j = 0; j < s; ++j) {
        if (keys[j] == keys[i]) {
          if (j < i) representative = false;
          group_order += spec.orders[j];
        }
      }
      if (representative && group_order % 2 == 1) {
        report.grouped_applies = true;
        break;
      }
    }
  }

  const double step = 2.0 * std::numbers::pi / static_cast<double>(p);
  std::uint64_t phase_idx = 0;
  std::complex<double> acc{0.0, 0.0};
  for (std::uint64_t a = 0; a < p; ++a) {
    bool excluded = false;
    for (std::size_t i = 0; i < s; ++i)
      if (pos[i] == 0) {
        excluded = true;
        break;
      }
    if (excluded) {
      ++report.excluded;
    } else {
      double prod = 1.0;
      for (std::size_t i = 0; i < s; ++i)
        prod *= u_fast(spec.orders[i], table.cos_ratio(pos[i]));
      if (twist == 0)
        acc += prod;
      else
        acc += prod * std::polar(1.0, step * static_cast<double>(phase_idx));
    }
    for (std::size_t i = 0; i < s; ++i) {
      pos[i] += scale[i];
      if (pos[i] >= p) pos[i] -= p;
    }
    phase_idx += twist;
    if (phase_idx >= p) phase_idx -= p;
  }
  report.value = acc;

  const double abs_value = std::abs(acc);
  report.distinct.label = "multisum_distinct";
  report.distinct.observed = abs_value;
  report.distinct.bound = multilinear_distinct_bound(p, spec.orders);
  report.distinct.ratio = bound_ratio(abs_value, report.distinct.bound);
  report.grouped.label = "multisum_grouped";
  report.grouped.observed = abs_value;
  report.grouped.bound = multilinear_grouped_bound(p, spec.orders);
  report.grouped.ratio = bound_ratio(abs_value, report.grouped.bound);
  return report;
}

namespace {

// Window sums need y[n] = U_k(cos theta_p(m n)) for n mod p plus a prefix
// table long enough to cover windows that wrap past p.
struct WindowWorkspace {
  std::vector<double> prefix;  // prefix[i] = sum_{n=1..i} y[n mod p]
};

WindowWorkspace window_workspace(const KloostermanTable& table, const WindowMomentSpec& spec,
                                 const char* who) {
  TwistView view(table, spec.multiplier, who);
  const std::uint64_t p = view.p;
  if (spec.window < 1 || spec.window > p)
    throw std::domain_error(std::string(who) + ": window must lie in [1, p]");
  if (spec.order < 1) throw std::domain_error(std::string(who) + ": moment order must be >= 1");
  if (p * spec.window > kWindowWorkLimit)
    throw CostGuardError(std::string(who) + ": p*h exceeds the brute-force work cap");

  std::vector<double> y(p);
  for (std::uint64_t n = 0; n < p; ++n) y[n] = u_fast(spec.cheb_order, view.cos_ratio(n));

  WindowWorkspace ws;
  ws.prefix.resize(p + spec.window + 1, 0.0);
  std::uint64_t n_mod = 0;
  for (std::uint64_t i = 1; i <= p + spec.window; ++i) {
    ++n_mod;
    if (n_mod >= p) n_mod -= p;
    ws.prefix[i] = ws.prefix[i - 1] + y[n_mod];
  }
  return ws;
}

}  // namespace

double window_moment(const KloostermanTable& table, const WindowMomentSpec& spec) {
  const WindowWorkspace ws = window_workspace(table, spec, "window_moment");
  const std::uint64_t p = table.p.value();
  double total = 0.0;
  for (std::uint64_t a = 1; a <= p; ++a)
    total += pow_2r(ws.prefix[a + spec.window] - ws.prefix[a], spec.order);
  return total;
}

double window_max_moment(const KloostermanTable& table, const WindowMomentSpec& spec) {
  const WindowWorkspace ws = window_workspace(table, spec, "window_max_moment");
  const std::uint64_t p = table.p.value();
  double total = 0.0;
  for (std::uint64_t a = 1; a <= p; ++a) {
    double best = 0.0;
    for (std::uint64_t len = 1; len < spec.window; ++len)
      best = std::max(best, std::fabs(ws.prefix[a + len] - ws.prefix[a]));
    total += pow_2r(best, spec.order);
  }
  return total;
}

BoundReport partition_max_moment(const KloostermanTable& table,
                                 std::span<const IntervalSpec> intervals, std::uint64_t h,
                                 unsigned r, unsigned k, std::uint64_t seed) {
  const std::uint64_t p = table.p.value();
  if (table.b != 1)
    throw std::invalid_argument("partition_max_moment: base table must have twist b = 1");
  if (h == 0 || r == 0) throw std::domain_error("partition_max_moment: h and r must be >= 1");
  if (intervals.empty()) throw std::domain_error("partition_max_moment: no intervals");

  std::vector<IntervalSpec> sorted(intervals.begin(), intervals.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const IntervalSpec& a, const IntervalSpec& b) { return a.start < b.start; });
  for (std::size_t t = 0; t < sorted.size(); ++t) {
    const auto& iv = sorted[t];
    if (iv.length <= h || iv.length > 2 * h)
      throw std::domain_error("partition_max_moment: interval length must satisfy h < N <= 2h");
    const std::int64_t last = iv.start + static_cast<std::int64_t>(iv.length);
    if (iv.start < -1 || last >= static_cast<std::int64_t>(p))
      throw std::domain_error("partition_max_moment: interval leaves [0, p)");
    if (t + 1 < sorted.size() && iv.start + static_cast<std::int64_t>(iv.length) > sorted[t + 1].start)
      throw std::domain_error("partition_max_moment: intervals overlap");
  }

  std::vector<std::uint64_t> candidates;
  if (p <= kExhaustiveTwistLimit) {
    candidates.resize(p - 1);
    for (std::uint64_t a = 1; a < p; ++a) candidates[a - 1] = a;
  } else {
    SplitMix64 rng(seed);
    candidates.resize(kPartitionSamples);
    for (auto& a : candidates) a = 1 + rng.below(p - 1);
  }

  double total = 0.0;
  for (const auto& iv : sorted) {
    double best = 0.0;
    for (std::uint64_t a : candidates) {
      std::uint64_t idx = reduce_mod(iv.start, p) * a % p;
      double sum = 0.0;
      for (std::uint64_t i = 0; i < iv.length; ++i) {
        idx += a;
        if (idx >= p) idx -= p;
        sum += u_fast(k, table.cos_ratio(idx));
      }
      best = std::max(best, std::fabs(sum));
    }
    total += pow_2r(best, r);
  }

  BoundReport report;
  report.label = "partition_max_moment";
  report.observed = total;
  report.bound = partition_max_moment_bound(p, h, r, k);
  report.ratio = bound_ratio(total, report.bound);
  report.params = {{"p", static_cast<double>(p)},
                   {"h", static_cast<double>(h)},
                   {"r", static_cast<double>(r)},
                   {"k", static_cast<double>(k)},
                   {"intervals", static_cast<double>(sorted.size())}};
  return report;
}

HorizontalReport horizontal_scan(IntervalSpec iv, std::uint64_t x, std::int64_t h, unsigned k,
                                 unsigned threads) {
  if (x < 3) throw std::domain_error("horizontal_scan: x must be >= 3");
  if (x > 100000) throw CostGuardError("horizontal_scan: x capped at 1e5 (one table per prime)");

  const std::vector<std::uint64_t> primes = primes_in(x, 2 * x);

  struct PerPrime {
    double u_sum = 0.0;
    std::uint64_t pos = 0, neg = 0, zero = 0;
  };
  std::vector<PerPrime> slots(primes.size());

  parallel_chunks(
      primes.size(),
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const std::uint64_t q = primes[i];
          const KloostermanTable table = build_table(1, PrimeModulus(q), TableMethod::dft);
          const std::uint64_t hr = reduce_mod(h, q);
          const double tol = zero_tolerance(q);
          PerPrime& slot = slots[i];
          scan_interval(q, iv, [&](std::uint64_t rq) {
            if (rq != 0) slot.u_sum += u_fast(k, table.cos_ratio(rq));
            if (hr == 0) return;  // sign statistics need q not dividing h
            if (rq == 0) {
              ++slot.zero;
              return;
            }
            const double s = table.values[rq * hr % q];
            if (std::fabs(s) <= tol)
              ++slot.zero;
            else if (s > 0.0)
              ++slot.pos;
            else
              ++slot.neg;
          });
        }
      },
      threads);

  HorizontalReport report;
  report.prime_count = primes.size();
  for (const PerPrime& slot : slots) {  // ascending q: deterministic reduce
    report.u_sum += slot.u_sum;
    report.positive_pairs += slot.pos;
    report.negative_pairs += slot.neg;
    report.zero_pairs += slot.zero;
  }
  report.sign_main_term = 0.5 * static_cast<double>(iv.length) * static_cast<double>(primes.size());
  return report;
}

}  // namespace kloosterlab
