#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "kloosterlab/errors.hpp"
#include "kloosterlab/statistics.hpp"
#include "oracles.hpp"

using namespace kloosterlab;

namespace {

const KloostermanTable& table5() {
  static const KloostermanTable t = build_table(1, PrimeModulus(5), TableMethod::naive);
  return t;
}

const KloostermanTable& table1009() {
  static const KloostermanTable t = build_table(1, PrimeModulus(1009), TableMethod::dft);
  return t;
}

}  // namespace

TEST_CASE("interval_sum basics at p = 5") {
  const auto& t = table5();
  // U_1(cos theta) = S / sqrt(p); the four-term sum is 1/sqrt(5)
  auto r = interval_sum(t, 1, {0, 4}, 1);
  CHECK(r.value == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-10));
  CHECK(r.zero_index_hits == 0);

  // full period: orthogonality makes the total sum vanish exactly
  r = interval_sum(t, 1, {0, 5}, 1);
  CHECK(std::fabs(r.value) < 1e-12);
  CHECK(r.zero_index_hits == 1);

  CHECK(interval_sum(t, 1, {3, 0}, 1).value == 0.0);
  CHECK_THROWS_AS(interval_sum(t, 5, {0, 4}, 1), std::domain_error);
  CHECK_THROWS_AS(interval_sum(t, 0, {0, 4}, 1), std::domain_error);
}

TEST_CASE("shift invariance and full-period collapse") {
  const auto& t = table1009();
  const std::uint64_t p = 1009;
  for (unsigned k : {1u, 2u, 5u}) {
    const auto a = interval_sum(t, 3, {17, 100}, k);
    const auto b = interval_sum(t, 3, {17 + static_cast<std::int64_t>(p), 100}, k);
    CHECK(a.value == b.value);  // exact: identical index walk

    // (0, p] = (0, p-1] plus the a = 0 term
    const auto full = interval_sum(t, 3, {0, p}, k);
    const auto star = interval_sum(t, 3, {0, p - 1}, k);
    const double at_zero = chebyshev_u(k, t.cos_ratio(0));
    CHECK(full.zero_index_hits == 1);
    CHECK(std::fabs(full.value - star.value - at_zero) <= 1e-9 * (k + 1.0));
  }
}

TEST_CASE("negative interval starts reduce correctly") {
  const auto& t = table1009();
  const auto a = interval_sum(t, 1, {-5, 10}, 2);
  const auto b = interval_sum(t, 1, {-5 + 1009, 10}, 2);
  CHECK(a.value == b.value);
}

TEST_CASE("twisted interval sums") {
  const auto& t = table5();
  // m = 0 collapses to the plain sum
  const auto plain = interval_sum(t, 1, {0, 4}, 1);
  const auto twist0 = twisted_interval_sum(t, 1, {0, 4}, 0, 1);
  CHECK(twist0.value.real() == doctest::Approx(plain.value).epsilon(1e-12));
  CHECK(std::fabs(twist0.value.imag()) < 1e-12);

  // full period, m != 0: five-term direct oracle
  for (std::int64_t m : {1, 2, 3}) {
    const auto got = twisted_interval_sum(t, 1, {0, 5}, m, 1);
    std::complex<double> expected{0.0, 0.0};
    for (std::uint64_t a = 1; a <= 5; ++a) {
      const double u = chebyshev_u(1, t.cos_ratio(a % 5));
      expected += u * std::polar(1.0, 2.0 * std::numbers::pi *
                                          static_cast<double>((m * a) % 5) / 5.0);
    }
    CHECK(std::abs(got.value - expected) < 1e-9);
  }

  CHECK(std::abs(twisted_interval_sum(t, 1, {0, 0}, 2, 1).value) == 0.0);
}

TEST_CASE("full-period Chebyshev sums against the Katz bound") {
  const auto& t = table5();
  auto r = full_period_sum(t, 1);
  CHECK(r.observed == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-10));
  CHECK(r.bound == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  CHECK(r.ratio == doctest::Approx(0.2).epsilon(1e-9));

  // k = 2: sum of (S^2 - p)/p over a = 1..4 equals -1/p
  r = full_period_sum(t, 2);
  CHECK(r.observed == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(r.bound == doctest::Approx(1.5 * std::sqrt(5.0)).epsilon(1e-12));

  const auto t7 = build_table(1, PrimeModulus(7), TableMethod::naive);
  r = full_period_sum(t7, 1);
  CHECK(r.observed == doctest::Approx(1.0 / std::sqrt(7.0)).epsilon(1e-9));

  // the bound is a theorem: exhaustive for p <= 503, k <= 20
  for (std::uint64_t p : oracles::sieve_eratosthenes(503)) {
    const auto table = build_table(1, PrimeModulus(p), TableMethod::dft);
    for (unsigned k = 1; k <= 20; ++k) CHECK(full_period_sum(table, k).ratio <= 1.0 + 1e-6);
  }
}

TEST_CASE("moment constant") {
  CHECK(moment_main_coefficient(1) == doctest::Approx(0.84882636315677512).epsilon(1e-14));
  CHECK(moment_main_coefficient(2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(moment_main_coefficient(3) == doctest::Approx(1.3581221810508402).epsilon(1e-14));
  CHECK(moment_main_coefficient(4) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("moments over full periods") {
  const auto& t = table1009();
  const double p = 1009.0;
  IntervalSpec star{0, 1008};

  // exact identities: first and second signed moments
  auto m1 = signed_moment(t, 1, star, 1);
  CHECK(m1.observed == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m1.main_term == 0.0);  // parity factor kills odd alpha
  CHECK(std::isinf(m1.ratio));
  CHECK(m1.error_scale > 0.0);

  auto m2 = signed_moment(t, 1, star, 2);
  CHECK(m2.observed == doctest::Approx(p * p - p - 1.0).epsilon(1e-9));
  CHECK(m2.main_term == doctest::Approx(1008.0 * p).epsilon(1e-12));
  CHECK(m2.ratio == doctest::Approx(1.0).epsilon(2e-3));

  auto a2 = abs_moment(t, 1, star, 2.0);
  CHECK(a2.observed == doctest::Approx(m2.observed).epsilon(1e-12));

  // fourth moment hovers near the asymptotic 2 N p^2
  auto a4 = abs_moment(t, 1, star, 4.0);
  CHECK(a4.observed / (1008.0 * p * p) == doctest::Approx(2.0).epsilon(0.05));

  CHECK_THROWS_AS(signed_moment(t, 1, star, 0), std::domain_error);
  CHECK_THROWS_AS(abs_moment(t, 1, star, 0.0), std::domain_error);
  CHECK_THROWS_AS(abs_moment(t, 1009, star, 2.0), std::domain_error);
}

TEST_CASE("sign counts") {
  const auto& t = table5();
  auto r = sign_count(t, 1, {0, 4});
  CHECK(r.positives == 3);  // 0.382, 1.236, 2.618
  CHECK(r.negatives == 1);  // -3.236
  CHECK(r.zero_bucket == 0);
  CHECK(r.main_term == doctest::Approx(2.0));

  r = sign_count(t, 1, {0, 0});
  CHECK(r.positives == 0);
  CHECK(r.negatives == 0);
  CHECK(r.zero_bucket == 0);

  // full period: partition property and rough balance
  const auto& big = table1009();
  r = sign_count(big, 1, {0, 1009});
  CHECK(r.positives + r.negatives + r.zero_bucket == 1009);
  CHECK(r.zero_bucket >= 1);  // the a = 0 hit
  const double dev = std::fabs(static_cast<double>(r.positives) - 1009.0 / 2.0);
  CHECK(dev <= omega_r(1009, 1009, 2) * std::pow(1009.0, 0.05));
}

TEST_CASE("extreme value counts") {
  const auto& t = table1009();
  IntervalSpec star{0, 1008};

  auto small = small_value_count(t, 1, star, 1.0);
  CHECK(small.observed == 1008);  // Weil bound: everything is small at delta = 1
  CHECK(small.main_term == doctest::Approx(1008.0).epsilon(1e-12));
  auto large = large_value_count(t, 1, star, 1.0);
  CHECK(large.observed == 0);
  CHECK(large.main_term == doctest::Approx(0.0));

  for (double delta : {0.25, 0.5, 0.75}) {
    small = small_value_count(t, 1, star, delta);
    large = large_value_count(t, 1, star, delta);
    std::uint64_t boundary = 0;
    for (std::uint64_t a = 1; a < 1009; ++a)
      if (std::fabs(t.cos_ratio(a)) == delta) ++boundary;
    CHECK(small.observed + large.observed - boundary == 1008);
    // closed-form main terms are complementary
    CHECK(small.main_term + large.main_term == doctest::Approx(1008.0).epsilon(1e-9));
  }

  CHECK_THROWS_AS(small_value_count(t, 1, star, 0.0), std::domain_error);
  CHECK_THROWS_AS(large_value_count(t, 1, star, 1.5), std::domain_error);
}

TEST_CASE("sato_tate_cdf closed form") {
  CHECK(sato_tate_cdf(0.0, std::numbers::pi) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sato_tate_cdf(0.0, std::numbers::pi / 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sato_tate_cdf(std::numbers::pi / 3, 2 * std::numbers::pi / 3) ==
        doctest::Approx(0.60899778104422936).epsilon(1e-14));
  // monotone in beta
  double prev = 0.0;
  for (int i = 1; i <= 64; ++i) {
    const double b = std::numbers::pi * i / 64.0;
    const double v = sato_tate_cdf(0.0, b);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(sato_tate_cdf(-0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(sato_tate_cdf(0.5, 0.4), std::domain_error);
  CHECK_THROWS_AS(sato_tate_cdf(0.0, 4.0), std::domain_error);
}

TEST_CASE("empirical cdf discrepancy") {
  const auto& t = table1009();
  const double d = empirical_cdf_discrepancy(t, 1, {0, 1008});
  CHECK(d > 0.0);
  CHECK(d <= 10.0 * std::pow(1009.0, -0.25));

  // single point: discrepancy is the larger CDF gap around that angle
  const double single = empirical_cdf_discrepancy(t, 1, {0, 1});
  CHECK(single <= 1.0);
  const double theta1 = std::acos(t.cos_ratio(1));
  CHECK(single >= 1.0 - sato_tate_cdf(0.0, theta1) - 1e-9);

  CHECK_THROWS_AS(empirical_cdf_discrepancy(t, 1, {0, 0}), std::domain_error);
}

TEST_CASE("multilinear sums") {
  const auto& t = table5();

  // s = 1, f(a) = a, k = 1, h = 0: the starred first-moment identity
  MultiSumSpec spec;
  spec.polys = {{1, 0}};
  spec.orders = {1};
  spec.twist = 0;
  auto r = multilinear_sum(t, spec);
  CHECK(std::abs(r.value) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-10));
  CHECK(r.excluded == 1);
  CHECK(r.distinct_applies);
  CHECK(r.grouped_applies);  // the single group has odd total order
  CHECK(r.distinct.bound == doctest::Approx(2.0 * std::sqrt(5.0)).epsilon(1e-12));

  // repeated polynomial: U_1^2 = U_0 + U_2 via linearization
  MultiSumSpec rep;
  rep.polys = {{1, 0}, {1, 0}};
  rep.orders = {1, 1};
  rep.twist = 0;
  const auto rr = multilinear_sum(t, rep);
  double direct = 0.0;
  for (std::uint64_t a = 1; a < 5; ++a) {
    const double x = t.cos_ratio(a);
    direct += chebyshev_u(0, x) + chebyshev_u(2, x);
  }
  CHECK(rr.value.real() == doctest::Approx(direct).epsilon(1e-9));
  CHECK_FALSE(rr.distinct_applies);  // identical polynomials
  CHECK_FALSE(rr.grouped_applies);   // twist 0 and the group order 2 is even

  MultiSumSpec bad;
  bad.polys = {{0, 1}};
  bad.orders = {1};
  CHECK_THROWS_AS(multilinear_sum(t, bad), std::domain_error);
}

TEST_CASE("multilinear hypothesis flags") {
  const auto& t = table5();
  MultiSumSpec spec;
  spec.polys = {{1, 0}, {1, 1}};
  spec.orders = {2, 2};
  spec.twist = 0;
  auto r = multilinear_sum(t, spec);
  CHECK(r.distinct_applies);       // distinct polynomials, orders nonzero
  CHECK_FALSE(r.grouped_applies);  // twist 0, all group orders even
  spec.twist = 1;
  r = multilinear_sum(t, spec);
  CHECK(r.grouped_applies);
  spec.twist = 0;
  spec.orders = {2, 3};
  r = multilinear_sum(t, spec);
  CHECK(r.grouped_applies);  // one group has odd total order
}

TEST_CASE("even-order multilinear sums reduce to full-period sums via linearization") {
  for (std::uint64_t p : {101ull, 503ull}) {
    const auto table = build_table(1, PrimeModulus(p), TableMethod::dft);
    MultiSumSpec spec;
    spec.polys = {{1, 0}, {1, 0}};
    spec.orders = {2, 4};
    spec.twist = 0;
    const auto r = multilinear_sum(table, spec);

    const auto beta = linearize_product(spec.orders);  // U_2 U_4 = sum beta_l U_l
    double expected = 0.0;
    for (std::size_t l = 0; l < beta.size(); ++l) {
      if (beta[l] == 0) continue;
      double star_sum = 0.0;  // sum over a = 1..p-1 of U_l
      for (std::uint64_t a = 1; a < p; ++a) star_sum += chebyshev_u(static_cast<unsigned>(l), table.cos_ratio(a));
      expected += static_cast<double>(beta[l]) * star_sum;
    }
    CHECK(r.value.real() == doctest::Approx(expected).epsilon(1e-6));
    CHECK(std::abs(r.value.imag()) < 1e-9);
  }
}

TEST_CASE("window moments at p = 5") {
  const auto& t = table5();
  // h = 1, r = 1, k = 1, m = 1: sum over a of U_1(cos theta(a+1))^2
  // = sum over the full period of S(n)^2 / p = (p^2 - p)/p = p - 1 = 4.
  WindowMomentSpec spec{1, 1, 1, 1};
  CHECK(window_moment(t, spec) == doctest::Approx(4.0).epsilon(1e-9));

  // max over h' < 1 is empty
  CHECK(window_max_moment(t, spec) == 0.0);

  // h = 2: window sums pair consecutive values; direct 5-term oracle
  WindowMomentSpec spec2{2, 1, 1, 1};
  double expected = 0.0;
  for (std::uint64_t a = 1; a <= 5; ++a) {
    const double w =
        chebyshev_u(1, t.cos_ratio((a + 1) % 5)) + chebyshev_u(1, t.cos_ratio((a + 2) % 5));
    expected += w * w;
  }
  CHECK(window_moment(t, spec2) == doctest::Approx(expected).epsilon(1e-9));

  // the maximal variant with window h+1 dominates the plain window-h moment
  WindowMomentSpec spec_max{3, 1, 1, 1};
  CHECK(window_max_moment(t, spec_max) >= window_moment(t, spec2) - 1e-12);

  CHECK_THROWS_AS(window_moment(t, WindowMomentSpec{0, 1, 1, 1}), std::domain_error);
  CHECK_THROWS_AS(window_moment(t, WindowMomentSpec{6, 1, 1, 1}), std::domain_error);
  CHECK_THROWS_AS(window_moment(t, WindowMomentSpec{1, 1, 5, 1}), std::domain_error);
}

TEST_CASE("window max moments dominate and obey the bound shape at p = 1009") {
  const auto& t = table1009();
  for (std::uint64_t h : {10ull, 31ull}) {
    for (unsigned r : {1u, 2u}) {
      WindowMomentSpec spec{h, r, 1, 1};
      const double moment = window_moment(t, spec);
      WindowMomentSpec next{h + 1, r, 1, 1};
      CHECK(window_max_moment(t, next) >= moment - 1e-9);

      const auto bounds = window_moment_bounds(1009, h, r, 1);
      const double budget = std::pow(16.0, r);
      CHECK(moment / bounds.moment <= budget);
      CHECK(window_max_moment(t, spec) / bounds.max_moment <= budget);
    }
  }
}

TEST_CASE("partitioned maximal moments") {
  const auto& t = table5();
  // single interval (0, 2]: m in {1, 2}; exhaustive max over a in 1..4
  std::vector<IntervalSpec> part{{0, 2}};
  const auto report = partition_max_moment(t, part, 1, 1, 1);
  double expected = 0.0;
  for (std::uint64_t a = 1; a < 5; ++a) {
    const double w =
        chebyshev_u(1, t.cos_ratio(a % 5)) + chebyshev_u(1, t.cos_ratio(2 * a % 5));
    expected = std::max(expected, w * w);
  }
  CHECK(report.observed == doctest::Approx(expected).epsilon(1e-10));
  CHECK(report.bound == doctest::Approx(partition_max_moment_bound(5, 1, 1, 1)).epsilon(1e-12));

  // validation: overlap and window-size violations
  std::vector<IntervalSpec> overlap{{0, 2}, {1, 2}};
  CHECK_THROWS_AS(partition_max_moment(t, overlap, 1, 1, 1), std::domain_error);
  std::vector<IntervalSpec> toolong{{0, 4}};
  CHECK_THROWS_AS(partition_max_moment(t, toolong, 1, 1, 1), std::domain_error);
  std::vector<IntervalSpec> outside{{3, 2}};
  CHECK_THROWS_AS(partition_max_moment(t, outside, 1, 1, 1), std::domain_error);
}

TEST_CASE("partitioned maximal moments on a real partition at p = 1009") {
  const auto& t = table1009();
  const std::uint64_t h = 10;
  std::vector<IntervalSpec> part;
  for (std::int64_t start = -1; start + 2 * static_cast<std::int64_t>(h) < 1009;
       start += 2 * h)
    part.push_back({start, 2 * h});
  for (unsigned r : {1u, 2u}) {
    const auto report = partition_max_moment(t, part, h, r, 1);
    CHECK(report.observed > 0.0);
    CHECK(report.ratio <= std::pow(16.0, r));
  }
}

TEST_CASE("horizontal scans") {
  // x = 10: primes 11, 13, 17, 19; a = 1 only
  const auto report = horizontal_scan({0, 1}, 10, 1, 1);
  CHECK(report.prime_count == 4);
  double expected = 0.0;
  for (std::uint64_t q : {11ull, 13ull, 17ull, 19ull})
    expected += kloosterman_naive(1, 1, PrimeModulus(q)) / std::sqrt(static_cast<double>(q));
  CHECK(report.u_sum == doctest::Approx(expected).epsilon(1e-9));
  CHECK(report.positive_pairs + report.negative_pairs + report.zero_pairs == 4);
  CHECK(report.sign_main_term == doctest::Approx(2.0));

  const auto empty = horizontal_scan({0, 0}, 10, 1, 1);
  CHECK(empty.u_sum == 0.0);
  CHECK(empty.positive_pairs == 0);

  CHECK_THROWS_AS(horizontal_scan({0, 1}, 2, 1, 1), std::domain_error);
  CHECK_THROWS_AS(horizontal_scan({0, 1}, 200000, 1, 1), CostGuardError);
}

TEST_CASE("max interval sum over twists") {
  const auto& t = table5();
  const auto result = max_interval_sum_over_twists(t, {0, 3}, 1);
  CHECK(result.exhaustive);
  double expected = 0.0;
  for (std::uint64_t h = 1; h < 5; ++h)
    expected = std::max(expected, std::fabs(interval_sum(t, h, {0, 3}, 1).value));
  CHECK(result.max_abs == doctest::Approx(expected).epsilon(1e-12));

  const auto big = build_table(1, PrimeModulus(10007), TableMethod::dft);
  const auto sampled = max_interval_sum_over_twists(big, {0, 50}, 1, 64, 9);
  CHECK_FALSE(sampled.exhaustive);
  CHECK(sampled.max_abs > 0.0);
  // identical seeds draw identical twists
  const auto again = max_interval_sum_over_twists(big, {0, 50}, 1, 64, 9);
  CHECK(sampled.max_abs == again.max_abs);
  CHECK(sampled.argmax_h == again.argmax_h);
}
