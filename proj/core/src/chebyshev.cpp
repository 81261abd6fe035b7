#include "kloosterlab/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kloosterlab/errors.hpp"

namespace kloosterlab {

namespace {

constexpr unsigned kMaxProductDegree = 10000;

bool is_integer(double x) { return x == std::floor(x); }

// 1/Gamma(x) vanishes exactly at x = 0, -1, -2, ...
bool gamma_pole(double x) { return x <= 0.0 && is_integer(x); }

// log|Gamma(x)| with the sign computed explicitly (std::lgamma's signgam
// global is not thread-safe). x must not be a nonpositive integer.
struct SignedLogGamma {
  double log_abs;
  int sign;
};

SignedLogGamma log_gamma_signed(double x) {
  SignedLogGamma r{std::lgamma(x), 1};
  if (x < 0.0) {
    // Gamma alternates sign on the intervals (-n-1, -n).
    auto n = static_cast<long long>(std::floor(-x)) + 1;
    r.sign = (n % 2 == 0) ? 1 : -1;
  }
  return r;
}

// Gamma(a) / (Gamma(b) * Gamma(c)); returns 0 when 1/Gamma(b) or 1/Gamma(c)
// sits on a pole. a must be positive.
double gamma_ratio(double a, double b, double c) {
  if (gamma_pole(b) || gamma_pole(c)) return 0.0;
  const SignedLogGamma gb = log_gamma_signed(b);
  const SignedLogGamma gc = log_gamma_signed(c);
  const double value = std::exp(std::lgamma(a) - gb.log_abs - gc.log_abs);
  return value * gb.sign * gc.sign;
}

void require_positive_integer_alpha(double alpha, const char* who) {
  if (alpha < 1.0 || !is_integer(alpha))
    throw std::domain_error(std::string(who) +
                            ": signed power expansion requires integer alpha >= 1");
}

}  // namespace

double chebyshev_u(unsigned k, double x) {
  if (x > 1.0 || x < -1.0) throw std::domain_error("chebyshev_u: x outside [-1, 1]");
  double prev = 1.0;        // U_0
  if (k == 0) return prev;
  double cur = 2.0 * x;     // U_1
  for (unsigned j = 1; j < k; ++j) {
    double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double ChebyshevSeries::evaluate(double x) const {
  // Clenshaw for the U recurrence: b_j = c_j + 2x b_{j+1} - b_{j+2}; sum = b_0.
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t j = coefficients.size(); j-- > 0;) {
    double b0 = coefficients[j] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return b1;
}

std::vector<std::int64_t> linearize_product(std::span<const unsigned> orders) {
  std::uint64_t total = 0;
  for (unsigned k : orders) total += k;
  if (total > kMaxProductDegree)
    throw CostGuardError("linearize_product: total degree " + std::to_string(total) +
                         " exceeds " + std::to_string(kMaxProductDegree));

  std::vector<std::int64_t> cur{1};  // U_0
  for (unsigned k : orders) {
    std::vector<std::int64_t> next(cur.size() + k, 0);
    for (std::size_t l = 0; l < cur.size(); ++l) {
      if (cur[l] == 0) continue;
      const unsigned lo = std::min<unsigned>(static_cast<unsigned>(l), k);
      // U_l * U_k = sum_{j=0}^{min(l,k)} U_{l+k-2j}
      for (unsigned j = 0; j <= lo; ++j) next[l + k - 2 * j] += cur[l];
    }
    cur = std::move(next);
  }
  return cur;
}

double power_constant_term(double alpha) {
  require_positive_integer_alpha(alpha, "power_constant_term");
  auto a = static_cast<unsigned long long>(alpha);
  if (a % 2 == 1) return 0.0;
  return std::pow(2.0, -(alpha + 1.0)) * 2.0 *
         gamma_ratio(alpha + 1.0, alpha / 2.0 + 2.0, alpha / 2.0 + 1.0);
}

double power_coefficient(double alpha, unsigned ell) {
  require_positive_integer_alpha(alpha, "power_coefficient");
  auto a = static_cast<unsigned long long>(alpha);
  if ((a + ell) % 2 != 0) return 0.0;  // parity: 1 + (-1)^{alpha+ell} vanishes
  const double half_sum = (alpha + ell) / 2.0;
  const double half_diff = (alpha - static_cast<double>(ell)) / 2.0;
  return (ell + 1.0) * std::pow(2.0, -(alpha + 1.0)) * 2.0 *
         gamma_ratio(alpha + 1.0, half_sum + 2.0, half_diff + 1.0);
}

double abs_power_constant_term(double alpha) {
  if (alpha <= 0.0) throw std::domain_error("abs_power_constant_term: alpha must be positive");
  return std::pow(2.0, -alpha) * gamma_ratio(alpha + 1.0, alpha / 2.0 + 2.0, alpha / 2.0 + 1.0);
}

double abs_power_coefficient(double alpha, unsigned ell) {
  if (alpha <= 0.0) throw std::domain_error("abs_power_coefficient: alpha must be positive");
  return (2.0 * ell + 1.0) * std::pow(2.0, -alpha) *
         gamma_ratio(alpha + 1.0, alpha / 2.0 + ell + 2.0, alpha / 2.0 - ell + 1.0);
}

ChebyshevSeries expand_power(unsigned alpha, bool signed_power) {
  if (alpha < 1) throw std::domain_error("expand_power: alpha must be >= 1");
  ChebyshevSeries series;
  series.coefficients.assign(alpha + 1, 0.0);
  const double a = alpha;
  if (signed_power) {
    series.coefficients[0] = power_constant_term(a);
    for (unsigned l = 1; l <= alpha; ++l) series.coefficients[l] = power_coefficient(a, l);
  } else {
    series.coefficients[0] = abs_power_constant_term(a);
    for (unsigned l = 1; 2 * l <= alpha; ++l)
      series.coefficients[2 * l] = abs_power_coefficient(a, l);
  }
  return series;
}

ChebyshevSeries expand_indicator(double c, double d, unsigned truncation) {
  if (!(c >= -1.0 && c < d && d <= 1.0))
    throw std::domain_error("expand_indicator: need -1 <= c < d <= 1");
  const double phi_c = std::acos(c);  // upper integration limit in phi
  const double phi_d = std::acos(d);

  ChebyshevSeries series;
  series.coefficients.resize(truncation + 1);
  // With x = cos(phi): (2/pi) int sqrt(1-x^2) U_l dx
  //   = (1/pi) int (cos(l phi) - cos((l+2) phi)) d phi over [phi_d, phi_c].
  auto antiderivative = [](unsigned l, double phi) {
    if (l == 0) return phi - std::sin(2.0 * phi) / 2.0;
    return std::sin(l * phi) / l - std::sin((l + 2.0) * phi) / (l + 2.0);
  };
  for (unsigned l = 0; l <= truncation; ++l)
    series.coefficients[l] =
        (antiderivative(l, phi_c) - antiderivative(l, phi_d)) / std::numbers::pi;
  return series;
}

}  // namespace kloosterlab
