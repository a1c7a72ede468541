#pragma once

// Quadrature rules: Gauss-Legendre on intervals, Gauss-Jacobi, radial and
// tensor-product rules on the unit disk that absorb a boundary weight
// (1-|z|^2)^p, and composite rules on a truncated half-line.

#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

namespace hypcs::quad {

enum class Domain {
  Interval,      // nodes x on [lower, upper]
  RadialDisk,    // nodes u = 1 - |z|^2 on (0, 1); weights include the full angle
  TensorDisk,    // nodes (x, y) inside the unit disk
  SemiInfinite,  // nodes x on [0, X]; tail_bound covers [X, inf)
};

/// Deterministic fixed-order pairwise summation.
double pairwise_sum(std::span<const double> values);

struct QuadratureRule {
  Domain domain = Domain::Interval;
  std::vector<double> nodes;    // x, u, or the real part for TensorDisk
  std::vector<double> nodes_y;  // imaginary part for TensorDisk, empty otherwise
  std::vector<double> weights;
  double lower = -1.0;
  double upper = 1.0;
  /// Exponent p of the weight u^p = (1-|z|^2)^p absorbed by disk rules.
  double boundary_exponent = 0.0;
  /// For SemiInfinite rules: integral over [X, inf) of exp(-x^2/2). Integrands
  /// bounded by C exp(-x^2/2) have a neglected tail of at most C * tail_bound.
  double tail_bound = 0.0;
  /// Highest polynomial degree (in the rule variable, per panel for composite
  /// rules) integrated exactly.
  int exactness_degree = 0;

  std::size_t size() const { return weights.size(); }

  /// sum_i w_i f(node_i) with pairwise summation. For TensorDisk the callable
  /// receives (x, y); otherwise a single coordinate.
  template <class F>
  double integrate(F&& f) const {
    std::vector<double> terms(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if constexpr (std::is_invocable_v<F, double, double>) {
        terms[i] = weights[i] * f(nodes[i], nodes_y[i]);
      } else {
        terms[i] = weights[i] * f(nodes[i]);
      }
    }
    return pairwise_sum(terms);
  }
};

/// n-point Gauss-Legendre rule on [-1, 1]; exact through degree 2n-1.
QuadratureRule gauss_legendre(int n);

/// Gauss-Legendre mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// n-point Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta.
QuadratureRule gauss_jacobi(int n, double alpha, double beta);

/// Rule in u = 1 - |z|^2 for integrals over the disk of radial functions
/// against (1-|z|^2)^{sigma-2} dnu:
///   int_D F(|z|^2) (1-|z|^2)^{sigma-2} dnu ~= sum_i w_i F(1 - u_i).
/// Weights carry the factor pi from the angular integration.
QuadratureRule radial_disk_rule(double sigma, int n);

/// Product of radial_disk_rule(sigma, nr) with the ntheta-point trapezoidal
/// rule in angle. Nodes are Cartesian points of the disk.
QuadratureRule tensor_disk_rule(int nr, int ntheta, double sigma);

/// Composite Gauss-Legendre on [0, X]: ceil(X) equal panels of n nodes each.
QuadratureRule semiinfinite_rule(double X, int n);

}  // namespace hypcs::quad
