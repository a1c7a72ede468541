#include "hypcs/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hypcs::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Series and asymptotic regimes for I_a meet here.
constexpr double kBesselCutoff = 20.0;

bool is_nonpositive_integer(double v) {
  return v <= 0.0 && v == std::nearbyint(v);
}

// Returns j when v == -j for an integer 1 <= j <= n, otherwise 0.
int negative_integer_order(double v, int n) {
  if (v <= -1.0 && v == std::nearbyint(v) && -v <= n) {
    return static_cast<int>(-v);
  }
  return 0;
}

bool recurrence_is_safe(int n, double a, double b) {
  for (int k = 2; k <= n; ++k) {
    if (std::abs(k + a + b) < 1e-12 || std::abs(2.0 * k + a + b - 2.0) < 1e-12) {
      return false;
    }
  }
  return true;
}

double jacobi_recurrence(int n, double a, double b, double x) {
  double p0 = 1.0;
  if (n == 0) return p0;
  double p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
  for (int k = 2; k <= n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double p2 = (c2 * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// ln I_a(x) from the ascending series, written as ln t_0 + ln(sum t_k / t_0).
// All terms are positive, so the only error source is truncation.
SeriesValue log_bessel_ascending(double a, double x) {
  const double q = 0.25 * x * x;
  double ratio = 1.0;
  double sum = 1.0;
  double tail = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double factor = q / ((k + 1.0) * (k + a + 1.0));
    ratio *= factor;
    sum += ratio;
    if (factor < 1.0 && ratio * factor / (1.0 - factor) < 0.25 * kEps * sum) {
      tail = ratio * factor / (1.0 - factor) / sum;
      break;
    }
  }
  const double log_t0 = a * std::log(0.5 * x) - log_gamma(a + 1.0);
  return {log_t0 + std::log(sum), tail};
}

// Same series in log-sum-exp form for arguments where the raw ratio sum
// would overflow.
SeriesValue log_bessel_ascending_large(double a, double x) {
  const double lh = std::log(0.5 * x);
  auto log_term = [&](int k) {
    return (2.0 * k + a) * lh - log_gamma(k + 1.0) - log_gamma(k + a + 1.0);
  };
  // The largest term sits where q/((k+1)(k+a+1)) crosses one.
  const double q = 0.25 * x * x;
  const int peak = static_cast<int>(std::max(0.0, 0.5 * (-(a + 2.0) +
                                                         std::sqrt(a * a + 4.0 * q))));
  const double lmax = log_term(peak);
  double sum = 0.0;
  for (int k = peak; k >= 0; --k) {
    const double r = std::exp(log_term(k) - lmax);
    sum += r;
    if (r < 0.25 * kEps * sum) break;
  }
  double tail = 0.0;
  for (int k = peak + 1;; ++k) {
    const double r = std::exp(log_term(k) - lmax);
    sum += r;
    if (r < 0.25 * kEps * sum) {
      tail = r / sum;
      break;
    }
  }
  return {lmax + std::log(sum), tail};
}

// Hankel expansion e^{-x} I_a(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(a) / x^k.
// Returns the scaled value; tail is the first omitted term relative to the sum.
SeriesValue bessel_scaled_hankel(double a, double x) {
  const double mu = 4.0 * a * a;
  double term = 1.0;
  double sum = 1.0;
  double prev = 1.0;
  double tail = std::numeric_limits<double>::infinity();
  const int hump = static_cast<int>(std::sqrt(mu) / 2.0) + 2;
  for (int k = 1; k < 500; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * x);
    if (term == 0.0) {
      tail = 0.0;
      break;
    }
    if (k > hump && std::abs(term) > std::abs(prev)) {
      tail = std::abs(prev);
      break;
    }
    sum += term;
    prev = term;
    if (std::abs(term) < 0.25 * kEps * std::abs(sum)) {
      tail = std::abs(term);
      break;
    }
  }
  const double scale = 1.0 / std::sqrt(2.0 * std::numbers::pi * x);
  return {scale * sum, tail / std::abs(sum)};
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("log_gamma: argument must be positive, got " + std::to_string(x));
  }
  int sign = 1;
  return ::lgamma_r(x, &sign);
}

SignedLog log_gamma_signed(double x) {
  if (is_nonpositive_integer(x)) {
    throw DomainError("log_gamma_signed: pole at " + std::to_string(x));
  }
  int sign = 1;
  const double v = ::lgamma_r(x, &sign);
  return {v, sign};
}

double pochhammer(double a, int n) {
  if (n < 0) throw DomainError("pochhammer: negative count");
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= a + i;
  return p;
}

double binomial(double r, int j) {
  if (j < 0) return 0.0;
  double c = 1.0;
  for (int i = 0; i < j; ++i) c *= (r - i) / (i + 1.0);
  return c;
}

double jacobi_p_explicit(int n, double a, double b, double x) {
  if (n < 0) throw DomainError("jacobi_p_explicit: negative degree");
  const double lo = (x - 1.0) / 2.0;
  const double hi = (x + 1.0) / 2.0;
  double sum = 0.0;
  for (int s = 0; s <= n; ++s) {
    sum += binomial(n + a, n - s) * binomial(n + b, s) * std::pow(lo, s) *
           std::pow(hi, n - s);
  }
  return sum;
}

double jacobi_p(int n, double a, double b, double x) {
  if (n < 0) throw DomainError("jacobi_p: negative degree");
  if (n == 0) return 1.0;

  if (const int j = negative_integer_order(a, n); j > 0) {
    // Gamma(n+b+1)/Gamma(n+b+1-j) * (n-j)!/n! as a finite product.
    double c = 1.0;
    for (int i = 0; i < j; ++i) c *= (n + b - i) / (n - i);
    return c * std::pow((x - 1.0) / 2.0, j) * jacobi_p(n - j, j, b, x);
  }
  if (negative_integer_order(b, n) > 0) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * jacobi_p(n, b, a, -x);
  }
  if (recurrence_is_safe(n, a, b)) return jacobi_recurrence(n, a, b, x);
  return jacobi_p_explicit(n, a, b, x);
}

double jacobi_at_one(int n, double a, double /*b*/) {
  if (n < 0) throw DomainError("jacobi_at_one: negative degree");
  if (!(a > -1.0)) {
    throw DomainError("jacobi_at_one: first parameter must exceed -1, got " +
                      std::to_string(a));
  }
  double p = 1.0;
  for (int i = 1; i <= n; ++i) p *= (a + i) / i;
  return p;
}

bool jacobi_symmetry_check(int n, double a, double b, double x) {
  const double lhs = jacobi_p(n, a, b, x);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  const double rhs = sign * jacobi_p(n, b, a, -x);
  return std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs));
}

double laguerre_l(int k, double a, double x) {
  if (k < 0) throw DomainError("laguerre_l: negative degree");
  double l0 = 1.0;
  if (k == 0) return l0;
  double l1 = 1.0 + a - x;
  for (int j = 1; j < k; ++j) {
    const double l2 = ((2.0 * j + 1.0 + a - x) * l1 - (j + a) * l0) / (j + 1.0);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

SeriesValue bessel_i_scaled_series(double a, double x) {
  if (!(a >= 0.0) || !(x >= 0.0)) {
    throw DomainError("bessel_i: order and argument must be nonnegative");
  }
  if (x == 0.0) return {a == 0.0 ? 1.0 : 0.0, 0.0};
  if (x > kBesselCutoff) {
    const SeriesValue h = bessel_scaled_hankel(a, x);
    if (h.tail < 1e-14) return {h.value, h.tail * h.value};
  }
  const SeriesValue s =
      x <= 600.0 ? log_bessel_ascending(a, x) : log_bessel_ascending_large(a, x);
  const double v = std::exp(s.value - x);
  return {v, s.tail * v};
}

double bessel_i_scaled(double a, double x) { return bessel_i_scaled_series(a, x).value; }

double bessel_i(double a, double x) {
  if (!(a >= 0.0) || !(x >= 0.0)) {
    throw DomainError("bessel_i: order and argument must be nonnegative");
  }
  if (x == 0.0) return a == 0.0 ? 1.0 : 0.0;
  return std::exp(log_bessel_i(a, x));
}

double log_bessel_i(double a, double x) {
  if (!(a >= 0.0) || !(x > 0.0)) {
    throw DomainError("log_bessel_i: requires a >= 0 and x > 0");
  }
  if (x <= kBesselCutoff) return log_bessel_ascending(a, x).value;
  return std::log(bessel_i_scaled(a, x)) + x;
}

double gauss_2f1_terminating(int m, double b, double c, double w) {
  if (m < 0) throw DomainError("gauss_2f1_terminating: negative m");
  for (int i = 0; i < m; ++i) {
    if (c == -static_cast<double>(i)) {
      throw DomainError("gauss_2f1_terminating: c = " + std::to_string(c) +
                        " hits a zero of (c)_s before the sum terminates");
    }
  }
  double term = 1.0;
  double sum = 1.0;
  for (int s = 0; s < m; ++s) {
    term *= (s - m) * (b + s) / ((c + s) * (s + 1.0)) * w;
    sum += term;
  }
  return sum;
}

double meijer_g1111(double zeta, double a, double b) {
  if (!(1.0 + zeta > 0.0)) throw DomainError("meijer_g1111: requires 1 + zeta > 0");
  if (!(1.0 - a + b > 0.0)) throw DomainError("meijer_g1111: requires 1 - a + b > 0");
  if (!(zeta > 0.0) && b != 0.0) {
    throw DomainError("meijer_g1111: zeta^b undefined for zeta <= 0 and b != 0");
  }
  const double zb = (b == 0.0) ? 1.0 : std::pow(zeta, b);
  return std::exp(log_gamma(1.0 - a + b)) * zb * std::pow(1.0 + zeta, a - b - 1.0);
}

}  // namespace hypcs::specfun
