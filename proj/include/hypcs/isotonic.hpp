#pragma once

// Isotonic oscillator L_alpha = (1/2)(-d^2/dx^2 + x^2 + (alpha^2 - 1/4)/x^2)
// on L^2(R_+, dx) with Dirichlet condition at 0.

#include <functional>
#include <span>
#include <vector>

#include "hypcs/quad.hpp"
#include "hypcs/specfun.hpp"

namespace hypcs::isotonic {

using RealFn = std::function<double(double)>;

struct IsotonicModel {
  explicit IsotonicModel(double alpha);
  double alpha;
};

/// Spectral labelling lambda_k = 2 alpha + k + 1 used by the Husimi function and
/// the thermodynamical potential (ground level 2 alpha + 1, unit spacing).
double eigenvalue_lambda(const IsotonicModel& model, int k);

/// Eigenvalue of the differential operator L_alpha on psi_k: 2k + alpha + 1.
/// This is the spectrum the Hille-Hardy kernel and the finite-difference
/// Hamiltonian reproduce.
double operator_eigenvalue(const IsotonicModel& model, int k);

/// psi_k(x) = sqrt(2 k! / Gamma(k+alpha+1)) x^{alpha+1/2} e^{-x^2/2} L_k^{(alpha)}(x^2).
double eigenfunction_psi(const IsotonicModel& model, int k, double x);

/// (1/2)(-f'' + x^2 f + (alpha^2 - 1/4) f / x^2) at x, f'' by central differences.
double apply_hamiltonian_fd(const IsotonicModel& model, const RealFn& f, double x, double h);

/// D^{+-} f = (1/sqrt 2)(-(alpha+1/2)/x + x +- d/dx) f at x; sign is +1 or -1.
double ladder_apply_fd(const IsotonicModel& model, int sign, const RealFn& f, double x, double h);

/// Hille-Hardy kernel W_t(x, y) = sum_k e^{-t (2k+alpha+1)} psi_k(x) psi_k(y),
/// evaluated in closed form with the exponentially scaled Bessel function.
double heat_kernel(const IsotonicModel& model, double t, double x, double y);

/// Truncated spectral sum sum_{k<terms} e^{-t (2k+alpha+1)} psi_k(x) psi_k(y).
double heat_kernel_spectral(const IsotonicModel& model, double t, double x, double y, int terms);

enum class HeatMode { Spectral, Integral };

struct HeatOptions {
  double cutoff = 10.0;      // half-line truncation X
  int nodes_per_panel = 20;  // Gauss-Legendre order on each unit panel
};

/// e^{-t L_alpha} f sampled at xs.
///
/// Spectral mode sums e^{-t lambda_k} <f|psi_k> psi_k with quadrature inner
/// products; Integral mode integrates W_t(x, y) f(y) over [0, X]. Throws
/// DomainError if the integrand has not decayed below tol on the last panel.
std::vector<double> heat_apply(const IsotonicModel& model, double t, const RealFn& f,
                               std::span<const double> xs, HeatMode mode, double tol,
                               const HeatOptions& options = {});

}  // namespace hypcs::isotonic
