#include "hypcs/isotonic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hypcs::isotonic {

namespace {

void require_positive_time(double t) {
  if (!(t > 0.0)) throw DomainError("heat semigroup: t must be positive, got " + std::to_string(t));
}

// Largest |g| over the nodes of the last panel, times the panel width.
double last_panel_mass(const quad::QuadratureRule& rule, int per_panel,
                       const std::vector<double>& values) {
  const std::size_t n = values.size();
  const std::size_t start = n - static_cast<std::size_t>(per_panel);
  double peak = 0.0;
  for (std::size_t i = start; i < n; ++i) peak = std::max(peak, std::abs(values[i]));
  const double width = rule.upper / std::max(1.0, std::ceil(rule.upper));
  return peak * width;
}

}  // namespace

IsotonicModel::IsotonicModel(double a) : alpha(a) {
  if (!(a >= 0.5)) {
    throw DomainError("IsotonicModel: alpha must be at least 1/2, got " + std::to_string(a));
  }
}

double eigenvalue_lambda(const IsotonicModel& model, int k) {
  if (k < 0) throw DomainError("eigenvalue_lambda: k must be nonnegative");
  return 2.0 * model.alpha + k + 1.0;
}

double operator_eigenvalue(const IsotonicModel& model, int k) {
  if (k < 0) throw DomainError("operator_eigenvalue: k must be nonnegative");
  return 2.0 * k + model.alpha + 1.0;
}

double eigenfunction_psi(const IsotonicModel& model, int k, double x) {
  if (!(x > 0.0)) {
    throw DomainError("eigenfunction_psi: x must be positive (Dirichlet boundary at 0)");
  }
  if (k < 0) throw DomainError("eigenfunction_psi: k must be nonnegative");
  const double a = model.alpha;
  const double lag = specfun::laguerre_l(k, a, x * x);
  if (lag == 0.0) return 0.0;
  const double log_mag = 0.5 * (std::numbers::ln2 + specfun::log_gamma(k + 1.0) -
                                specfun::log_gamma(k + a + 1.0)) +
                         (a + 0.5) * std::log(x) - 0.5 * x * x + std::log(std::abs(lag));
  return std::copysign(std::exp(log_mag), lag);
}

double apply_hamiltonian_fd(const IsotonicModel& model, const RealFn& f, double x, double h) {
  if (!(h > 0.0) || !(x - h > 0.0)) {
    throw DomainError("apply_hamiltonian_fd: stencil must stay in x > 0");
  }
  const double a = model.alpha;
  const double fc = f(x);
  const double f2 = (f(x + h) - 2.0 * fc + f(x - h)) / (h * h);
  return 0.5 * (-f2 + x * x * fc + (a * a - 0.25) * fc / (x * x));
}

double ladder_apply_fd(const IsotonicModel& model, int sign, const RealFn& f, double x, double h) {
  if (sign != 1 && sign != -1) throw DomainError("ladder_apply_fd: sign must be +1 or -1");
  if (!(h > 0.0) || !(x > h)) {
    throw DomainError("ladder_apply_fd: stencil must stay in x > 0");
  }
  const double a = model.alpha;
  const double df = (f(x + h) - f(x - h)) / (2.0 * h);
  return (-(a + 0.5) / x * f(x) + x * f(x) + sign * df) / std::numbers::sqrt2;
}

double heat_kernel(const IsotonicModel& model, double t, double x, double y) {
  require_positive_time(t);
  if (!(x > 0.0) || !(y > 0.0)) throw DomainError("heat_kernel: x and y must be positive");
  const double r = std::exp(-2.0 * t);
  const double one_minus_r = -std::expm1(-2.0 * t);
  const double s = std::exp(-t);
  const double u = 2.0 * x * y * s / one_minus_r;
  // u - (x^2+y^2)(1+r)/(2(1-r)) rewritten without cancellation.
  const double one_minus_s = -std::expm1(-t);
  const double gauss = -(0.5 * (x - y) * (x - y) * (1.0 + r) + x * y * one_minus_s * one_minus_s) /
                       one_minus_r;
  const double log_pref = std::numbers::ln2 + 0.5 * std::log(x * y) - t - std::log(one_minus_r);
  return std::exp(log_pref + std::log(specfun::bessel_i_scaled(model.alpha, u)) + gauss);
}

double heat_kernel_spectral(const IsotonicModel& model, double t, double x, double y, int terms) {
  require_positive_time(t);
  std::vector<double> parts(terms);
  for (int k = 0; k < terms; ++k) {
    parts[k] = std::exp(-t * operator_eigenvalue(model, k)) * eigenfunction_psi(model, k, x) *
               eigenfunction_psi(model, k, y);
  }
  return quad::pairwise_sum(parts);
}

std::vector<double> heat_apply(const IsotonicModel& model, double t, const RealFn& f,
                               std::span<const double> xs, HeatMode mode, double tol,
                               const HeatOptions& options) {
  require_positive_time(t);
  if (!(tol > 0.0)) throw DomainError("heat_apply: tol must be positive");
  const quad::QuadratureRule rule = quad::semiinfinite_rule(options.cutoff, options.nodes_per_panel);
  const std::size_t n = rule.size();
  std::vector<double> fy(n);
  for (std::size_t i = 0; i < n; ++i) fy[i] = f(rule.nodes[i]);

  std::vector<double> out(xs.size(), 0.0);
  if (mode == HeatMode::Integral) {
    std::vector<double> g(n);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      for (std::size_t i = 0; i < n; ++i) g[i] = heat_kernel(model, t, xs[j], rule.nodes[i]) * fy[i];
      if (last_panel_mass(rule, options.nodes_per_panel, g) > tol) {
        throw DomainError("heat_apply: integrand has not decayed at the cutoff X = " +
                          std::to_string(options.cutoff));
      }
      for (std::size_t i = 0; i < n; ++i) g[i] *= rule.weights[i];
      out[j] = quad::pairwise_sum(g);
    }
    return out;
  }

  // Spectral mode. ||f|| bounds every |<f|psi_k>|, so the neglected terms are
  // at most ||f|| max_k |psi_k(x)| sum_{k>K} e^{-t lambda_k}.
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = rule.weights[i] * fy[i] * fy[i];
  const double fnorm = std::sqrt(quad::pairwise_sum(sq));
  const double ratio = std::exp(-2.0 * t);
  std::vector<double> psi(n);
  std::vector<double> prod(n);
  std::vector<std::vector<double>> terms(xs.size());
  double psi_peak = 1.0;
  for (int k = 0;; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      psi[i] = eigenfunction_psi(model, k, rule.nodes[i]);
      prod[i] = psi[i] * fy[i];
    }
    if (last_panel_mass(rule, options.nodes_per_panel, prod) > tol) {
      throw DomainError("heat_apply: <f|psi_k> integrand has not decayed at the cutoff");
    }
    for (std::size_t i = 0; i < n; ++i) prod[i] *= rule.weights[i];
    const double coeff = quad::pairwise_sum(prod);
    const double decay = std::exp(-t * operator_eigenvalue(model, k));
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double pk = eigenfunction_psi(model, k, xs[j]);
      psi_peak = std::max(psi_peak, std::abs(pk));
      terms[j].push_back(decay * coeff * pk);
    }
    const double tail = fnorm * psi_peak * decay * ratio / (1.0 - ratio);
    if (tail < tol) break;
    if (k > 100000) throw DomainError("heat_apply: spectral sum did not converge");
  }
  for (std::size_t j = 0; j < xs.size(); ++j) out[j] = quad::pairwise_sum(terms[j]);
  return out;
}

}  // namespace hypcs::isotonic
