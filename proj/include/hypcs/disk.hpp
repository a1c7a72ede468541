#pragma once

// Geometry of the unit disk and the eigenspaces of the weighted Laplacian
//   Delta_sigma = -4 (1-|z|^2) [ (1-|z|^2) d^2/dz dzbar - sigma zbar d/dzbar ]
// on L^2(D, (1-|z|^2)^{sigma-2} dnu).

#include <complex>
#include <functional>

#include "hypcs/specfun.hpp"

namespace hypcs::disk {

using cplx = std::complex<double>;

/// A point of the open unit disk.
class DiskPoint {
 public:
  DiskPoint(double re, double im);
  explicit DiskPoint(cplx z) : DiskPoint(z.real(), z.imag()) {}
  static DiskPoint polar(double r, double theta);

  double re() const { return re_; }
  double im() const { return im_; }
  cplx value() const { return {re_, im_}; }
  double norm2() const { return re_ * re_ + im_ * im_; }
  double abs() const;

 private:
  double re_;
  double im_;
};

/// Weight sigma > 1 and hyperbolic Landau level m with sigma - 2m - 1 > 0.
class HypIndex {
 public:
  HypIndex(double sigma, int m);

  double sigma() const { return sigma_; }
  int m() const { return m_; }
  /// sigma - 2m - 1, the second Jacobi parameter of the basis.
  double beta() const { return sigma_ - 2.0 * m_ - 1.0; }

  /// True when (sigma, m) is an admissible pair.
  static bool admissible(double sigma, int m);
  /// Largest admissible m for sigma, or -1 when sigma <= 1.
  static int max_level(double sigma);

 private:
  double sigma_;
  int m_;
};

struct BasisEval {
  cplx value;
  /// ln|value|; -infinity when the value is exactly zero.
  double log_magnitude = 0.0;
  /// Rounding-level error bound on |value|.
  double truncation_error = 0.0;
};

/// Hyperbolic distance d(z, w) with cosh^2 d = |1 - z wbar|^2 / ((1-|z|^2)(1-|w|^2)).
double bergman_distance(const DiskPoint& z, const DiskPoint& w);

/// Eigenvalue 4m(sigma - m - 1) of Delta_sigma on the level-m eigenspace.
double eigenvalue_eps(const HypIndex& idx);

/// Orthonormal basis function Phi_k^{sigma,m}(z) of the level-m eigenspace.
///
/// For k <= m this is
///   c_k (-1)^k (1-|z|^2)^{-m} zbar^{m-k} P_k^{(m-k, sigma-2m-1)}(1 - 2|z|^2).
/// For k > m the Jacobi polynomial has a negative-integer parameter; the
/// degree-reduction identity turns zbar^{m-k} P_k into a multiple of
/// z^{k-m} P_m^{(k-m, sigma-2m-1)}, which stays finite at z = 0 and keeps the
/// polynomial degree at m for every k.
BasisEval basis_phi(const HypIndex& idx, int k, const DiskPoint& z);

/// Reproducing kernel K(z, w) = sum_k Phi_k(z) conj(Phi_k(w)) in closed form:
///   (sigma-2m-1)/pi (1 - z wbar)^{-sigma} xi^{-m} P_m^{(0, sigma-2m-1)}(2 xi - 1),
///   xi = (1-|z|^2)(1-|w|^2) / |1 - z wbar|^2.
cplx reproducing_kernel(const HypIndex& idx, const DiskPoint& z, const DiskPoint& w);

/// Same kernel via the terminating 2F1 sum of the bilinear generating function,
/// before conversion to Jacobi form.
cplx reproducing_kernel_2f1(const HypIndex& idx, const DiskPoint& z, const DiskPoint& w);

/// Truncated sum_k Phi_k(z) conj(Phi_k(w)). The tail bound uses the known
/// diagonal K(z,z) and Cauchy-Schwarz, so it is certified.
struct KernelSeries {
  cplx value;
  double tail = 0.0;
  int terms = 0;
};
KernelSeries reproducing_kernel_series(const HypIndex& idx, const DiskPoint& z,
                                       const DiskPoint& w, double tol);

/// Values of a complex field at z and at z + s h, s in {+-1, +-2, +-i, +-2i}.
struct Stencil {
  cplx center;
  cplx east, east2;    // z + h, z + 2h
  cplx west, west2;    // z - h, z - 2h
  cplx north, north2;  // z + i h, z + 2i h
  cplx south, south2;  // z - i h, z - 2i h
};

/// Fourth-order central-difference value of Delta_sigma f at z.
cplx apply_delta_sigma_fd(const HypIndex& idx, const Stencil& f, const DiskPoint& z, double h);

/// Samples f on the stencil and applies Delta_sigma. Throws DomainError when
/// the stencil leaves the disk or h <= 0.
cplx apply_delta_sigma_fd(const HypIndex& idx, const std::function<cplx(const DiskPoint&)>& f,
                          const DiskPoint& z, double h);

}  // namespace hypcs::disk
