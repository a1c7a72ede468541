#pragma once

// Real special functions used throughout the library: log-gamma, Pochhammer
// symbols, Jacobi and Laguerre polynomials, the modified Bessel function I,
// terminating 2F1 sums and the one Meijer-G case the disk measure needs.
//
// Everything here is a pure function of its arguments.

#include <stdexcept>
#include <string>

namespace hypcs {

/// Raised when an argument falls outside the documented domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A series result together with an estimate of the neglected tail.
struct SeriesValue {
  double value = 0.0;
  double tail = 0.0;
};

namespace specfun {

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// ln|Gamma(x)| and sign(Gamma(x)) for any real x that is not a pole.
struct SignedLog {
  double log_abs = 0.0;
  int sign = 1;
};
SignedLog log_gamma_signed(double x);

/// Rising factorial a(a+1)...(a+n-1); 1 for n == 0.
double pochhammer(double a, int n);

/// Generalized binomial coefficient C(r, j) = r(r-1)...(r-j+1)/j! for real r.
double binomial(double r, int j);

/// Jacobi polynomial P_n^{(a,b)}(x).
///
/// Uses the three-term recurrence in the degree when none of its denominators
/// vanish. A negative-integer parameter (a = -j or b = -j, 1 <= j <= n) is
/// routed through the degree-reduction identity
///   P_n^{(-j,b)}(x) = [Gamma(n+b+1)/Gamma(n+b+1-j)] [(n-j)!/n!]
///                     ((x-1)/2)^j P_{n-j}^{(j,b)}(x),
/// which keeps the effective degree at n - j. Remaining degenerate parameter
/// pairs fall back to jacobi_p_explicit.
double jacobi_p(int n, double a, double b, double x);

/// Jacobi polynomial from the explicit finite sum
///   sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s).
/// Defined for every real (a, b); loses accuracy to cancellation at high degree.
double jacobi_p_explicit(int n, double a, double b, double x);

/// P_n^{(a,b)}(1) = Gamma(n+a+1) / (n! Gamma(a+1)); requires a > -1.
double jacobi_at_one(int n, double a, double b);

/// True when P_n^{(a,b)}(x) and (-1)^n P_n^{(b,a)}(-x) agree to 1e-12 relative.
bool jacobi_symmetry_check(int n, double a, double b, double x);

/// Generalized Laguerre polynomial L_k^{(a)}(x) by forward recurrence in k.
double laguerre_l(int k, double a, double x);

/// Modified Bessel function of the first kind I_a(x), a >= 0, x >= 0.
double bessel_i(double a, double x);

/// e^{-x} I_a(x); finite for arbitrarily large x.
double bessel_i_scaled(double a, double x);

/// ln I_a(x) for x > 0; avoids overflow for large x.
double log_bessel_i(double a, double x);

/// Scaled Bessel value with the estimated truncation error of the expansion used.
SeriesValue bessel_i_scaled_series(double a, double x);

/// Terminating Gauss sum 2F1(-m, b; c; w) = sum_{s<=m} (-m)_s (b)_s / ((c)_s s!) w^s.
/// c must avoid {0, -1, ..., -(m-1)}.
double gauss_2f1_terminating(int m, double b, double c, double w);

/// G^{1,1}_{1,1}(zeta | a; b) = Gamma(1-a+b) zeta^b (1+zeta)^{a-b-1}.
/// Requires 1 + zeta > 0, 1 - a + b > 0 and zeta > 0 unless b == 0.
double meijer_g1111(double zeta, double a, double b);

}  // namespace specfun
}  // namespace hypcs
