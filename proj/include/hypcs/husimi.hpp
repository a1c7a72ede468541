#pragma once

// Husimi function Q(z) = <z; sigma, m | e^{-t L_alpha} | z; sigma, m> of the
// isotonic oscillator heat semigroup, the grand-canonical potential of L_alpha
// and the Berezin-Lieb lower bound built from Q.
//
// Both Q and the potential use the spectral labelling lambda_k = 2 alpha + k + 1
// (isotonic::eigenvalue_lambda), so that
//   Q(z) = e^{-(2 alpha + 1) t} sum_k e^{-t k} |Phi_k(z)|^2 / N(z).

#include <vector>

#include "hypcs/disk.hpp"
#include "hypcs/isotonic.hpp"
#include "hypcs/quad.hpp"

namespace hypcs::husimi {

using disk::DiskPoint;
using disk::HypIndex;
using isotonic::IsotonicModel;

enum class QMethod { Series, Closed };

struct QResult {
  double value = 0.0;
  QMethod method = QMethod::Series;
  double truncation_error = 0.0;
};

/// Direct summation of the spectral series; the reference definition of Q.
/// The tail is bounded by e^{-(2alpha+1)t} e^{-t(K+1)} (1 - sum_{k<=K} p_k).
QResult q_series(const HypIndex& idx, const IsotonicModel& model, double t, const DiskPoint& z,
                 double tol);

/// Closed form of the same series with lambda = |z|^2, q = e^{-t}:
///   Q = e^{-(2a+1)t} (1-lambda)^{sigma-2m} (1-lambda q)^{m-sigma}
///       Gamma(sigma-m)/(m! Gamma(sigma-2m))
///       sum_{s<=m} (-m)_s (sigma-m)_s / ((sigma-2m)_s s!)
///                  (lambda-q)^{m-s} (-(1-lambda)^2 q / (1-lambda q))^s.
/// Finite everywhere on the disk, including |z|^2 = e^{-t}.
QResult q_closed(const HypIndex& idx, const IsotonicModel& model, double t, const DiskPoint& z);

/// The closed form as it is usually printed: an extra factor
/// pi (1-|z|^2)^sigma / (sigma - 2m - 1) and Jacobi parameters (sigma-2m, 0).
/// Kept to quantify the discrepancy; it does not reproduce Q(t -> 0) = 1.
double q_printed(const HypIndex& idx, const IsotonicModel& model, double t, const DiskPoint& z);

struct ThermoParams {
  ThermoParams(double beta, double epsilon, double alpha);
  double beta;
  double epsilon;  // e^{beta eta}
  double alpha;
};

struct ThermoValue {
  double value = 0.0;
  double error = 0.0;
};

/// Omega = -(1/beta) sum_k ln(1 + epsilon e^{-beta lambda_k}).
ThermoValue thermo_potential_exact(const ThermoParams& params, double tol);

struct BoundValue {
  int m = 0;
  double value = 0.0;
  /// |I_n - I_{n/2}|, the change from halving the radial rule.
  double quadrature_error = 0.0;
};

/// (1/beta) int_D ln(1/(1 + epsilon Q(z))) dmu_{sigma,m}(z) with beta = t.
///
/// The integrand depends on u = 1 - |z|^2 only and behaves like
/// u^{sigma-2m-2} at the boundary; the radial rule radial_disk_rule(sigma-2m, n)
/// absorbs that power. Throws DomainError when the halved-rule difference
/// exceeds tol.
BoundValue berezin_lieb_lower_bound(const HypIndex& idx, const ThermoParams& params, int nodes,
                                    double tol = 1e-8);

/// Same bound on a caller-supplied rule; it must be radial_disk_rule(sigma-2m, n)
/// for some n >= 2. The error estimate reruns with n/2 nodes.
BoundValue berezin_lieb_lower_bound(const HypIndex& idx, const ThermoParams& params,
                                    const quad::QuadratureRule& rule, double tol = 1e-8);

struct BestBound {
  int m_star = 0;
  double value = 0.0;
  std::vector<BoundValue> per_level;
};

/// Maximum of the lower bound over all admissible m (ties go to the smaller m).
BestBound best_lower_bound(double sigma, const ThermoParams& params, int nodes,
                           double tol = 1e-8);

}  // namespace hypcs::husimi
