#pragma once

// Generalized negative binomial states
//   |z; sigma, m> = N(z)^{-1/2} sum_k Phi_k^{sigma,m}(z) |psi_k>
// labelled by points of the unit disk.

#include <optional>
#include <vector>

#include "hypcs/disk.hpp"
#include "hypcs/quad.hpp"

namespace hypcs::gnbs {

using disk::cplx;
using disk::DiskPoint;
using disk::HypIndex;

/// N(z) = (sigma - 2m - 1) / (pi (1-|z|^2)^sigma).
double normalization(const HypIndex& idx, const DiskPoint& z);

/// Truncated coefficient vector c_k = N(z)^{-1/2} Phi_k(z), k = 0..K.
/// Immutable once built.
class GnbsState {
 public:
  GnbsState(HypIndex idx, DiskPoint z, std::vector<cplx> coeffs, double truncation_error);

  const HypIndex& index() const { return idx_; }
  const DiskPoint& label() const { return z_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  /// Upper bound on 1 - sum_k |c_k|^2.
  double truncation_error() const { return truncation_error_; }
  double norm2() const;

 private:
  HypIndex idx_;
  DiskPoint z_;
  std::vector<cplx> coeffs_;
  double truncation_error_;
};

GnbsState make_state(const HypIndex& idx, const DiskPoint& z, double tol);

/// <w|z> in closed form.
cplx overlap(const HypIndex& idx, const DiskPoint& z, const DiskPoint& w);

struct OverlapSeries {
  cplx value;
  double tail = 0.0;
  int terms = 0;
};
/// <w|z> by direct summation of the coefficient series; tail is certified.
OverlapSeries overlap_series(const HypIndex& idx, const DiskPoint& z, const DiskPoint& w,
                             double tol);

/// || |z> - |w> || = sqrt(2 (1 - Re <z|w>)).
double continuity_distance(const HypIndex& idx, const DiskPoint& z, const DiskPoint& w);

struct PhotonPmf {
  HypIndex idx;
  double lambda = 0.0;
  std::vector<double> probs;
  double mean = 0.0;
  double variance = 0.0;
  /// variance/mean - 1; empty when the mean vanishes (z = 0, m = 0).
  std::optional<double> mandel;
  /// Bound on the probability mass beyond the last listed k.
  double truncation_error = 0.0;
};

/// Photon-number distribution p_k = |Phi_k(z)|^2 / N(z), extended past kmax
/// until the neglected mass falls below 1e-12.
PhotonPmf photon_pmf(const HypIndex& idx, const DiskPoint& z, int kmax);

/// Closed-form negative binomial pmf (1-lambda)^sigma lambda^k Gamma(sigma+k)/(Gamma(sigma) k!).
double negative_binomial_pmf(double sigma, double lambda, int k);

/// Resolution-of-identity measure density (sigma-2m-1) / (pi (1-|z|^2)^2).
double measure_density(const HypIndex& idx, const DiskPoint& z);

/// The same density written as pi^{-1} (sigma-2m-1) G^{11}_{11}(-|z|^2 | -1; 0).
double measure_density_meijer(const HypIndex& idx, const DiskPoint& z);

struct IdentityCheck {
  /// residuals[j][k] = <Phi_j, Phi_k> - delta_jk under the weight (1-|z|^2)^{sigma-2}.
  std::vector<std::vector<cplx>> residuals;
  double max_residual = 0.0;
};

/// Gram matrix of Phi_0..Phi_{jk_max} under (1-|z|^2)^{sigma-2} dnu.
///
/// The basis carries a factor (1-|z|^2)^{-m}, so the rule must absorb the
/// combined weight (1-|z|^2)^{sigma-2m-2}: pass radial_disk_rule(sigma - 2m, n)
/// or tensor_disk_rule(nr, ntheta, sigma - 2m). With a radial rule the angular
/// integral is done analytically and off-diagonal entries vanish exactly.
IdentityCheck identity_check(const HypIndex& idx, int jk_max, const quad::QuadratureRule& rule);

}  // namespace hypcs::gnbs
