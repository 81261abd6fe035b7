#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace kloosterlab {

// Finite expansion sum_{l<=L} c[l] * U_l(x) in Chebyshev polynomials of the
// second kind.
struct ChebyshevSeries {
  std::vector<double> coefficients;

  double evaluate(double x) const;  // Clenshaw recurrence
  std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
};

// U_k(x) by the three-term recurrence U_{k+1} = 2x U_k - U_{k-1}.
// Throws std::domain_error for |x| > 1; |U_k(x)| <= k+1 on [-1,1].
double chebyshev_u(unsigned k, double x);

// Exact integer coefficients beta with prod_j U_{k_j} = sum_l beta[l] U_l,
// by repeated application of U_m U_n = sum_{j<=min(m,n)} U_{m+n-2j}.
// beta[l] = 0 whenever l and sum k_j have different parity; the empty product
// is U_0. Total degree is capped at 1e4.
std::vector<std::int64_t> linearize_product(std::span<const unsigned> orders);

// Coefficient of U_ell in the expansion of the signed power x^alpha
// (integer alpha >= 1 only; the signed power is ill-defined on x < 0
// otherwise). Zero when alpha+ell is odd or the trailing 1/Gamma pole fires.
double power_coefficient(double alpha, unsigned ell);

// Constant term of the signed expansion; zero for odd alpha.
double power_constant_term(double alpha);

// Coefficient of U_{2*ell} in the expansion of |x|^alpha, any real alpha > 0.
// Evaluated via log-Gamma with explicit sign tracking; exact zero at poles.
double abs_power_coefficient(double alpha, unsigned ell);

// Constant term of the |x|^alpha expansion: 2^{-alpha} Gamma(alpha+1) /
// (Gamma(alpha/2+2) Gamma(alpha/2+1)).
double abs_power_constant_term(double alpha);

// Finite series for x^alpha (signed_power = true) or |x|^alpha, integer
// alpha >= 1, truncated at degree alpha. The signed series and the even-alpha
// absolute series are exact; the absolute series for odd alpha is the
// degree-alpha truncation of an infinite expansion.
ChebyshevSeries expand_power(unsigned alpha, bool signed_power);

// Closed-form coefficients of the indicator of [c,d] against the Sato-Tate
// weight: f_hat(l) = (2/pi) * integral_c^d sqrt(1-x^2) U_l(x) dx for l = 0..L.
// Requires -1 <= c < d <= 1.
ChebyshevSeries expand_indicator(double c, double d, unsigned truncation);

}  // namespace kloosterlab
