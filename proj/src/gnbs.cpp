#include "hypcs/gnbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "series_tail.hpp"

namespace hypcs::gnbs {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxTerms = 1000000;

struct Coefficients {
  std::vector<cplx> values;
  double tail = 0.0;
};

// c_k = N^{-1/2} Phi_k(z) until the remaining mass 1 - sum |c_k|^2 is below tol,
// or the terms are negligible and decaying geometrically.
Coefficients coefficients(const HypIndex& idx, const DiskPoint& z, double tol, int min_terms) {
  if (!(tol > 0.0)) throw DomainError("gnbs: tol must be positive");
  const double inv_sqrt_n = 1.0 / std::sqrt(normalization(idx, z));
  Coefficients out;
  double mass = 0.0;
  double prev = 0.0;
  detail::GeometricTail geometric;
  for (int k = 0; k < kMaxTerms; ++k) {
    const cplx c = disk::basis_phi(idx, k, z).value * inv_sqrt_n;
    out.values.push_back(c);
    const double p = std::norm(c);
    mass += p;
    const double remaining = std::max(0.0, 1.0 - mass);
    const double floor = 4.0 * kEps * (k + 1);
    double tail = std::max(remaining, floor);
    bool negligible = false;
    const double geo = geometric.push(p);
    if (k > idx.m() + 1 && geo >= 0.0) {
      if (geo < 1e-3 * kEps) {
        negligible = true;
        tail = std::max(remaining, geo);
      }
    }
    if (idx.m() < k && p == 0.0 && prev == 0.0) {
      // Only the k = m coefficient survives at z = 0.
      negligible = true;
      tail = remaining;
    }
    prev = p;
    if (k + 1 >= min_terms && k >= idx.m() && (tail <= tol || negligible)) {
      out.tail = tail;
      return out;
    }
  }
  throw DomainError("gnbs: coefficient series did not converge within the term limit");
}

double sign_pow(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

double normalization(const HypIndex& idx, const DiskPoint& z) {
  return idx.beta() / (std::numbers::pi * std::pow(1.0 - z.norm2(), idx.sigma()));
}

GnbsState::GnbsState(HypIndex idx, DiskPoint z, std::vector<cplx> coeffs, double truncation_error)
    : idx_(idx), z_(z), coeffs_(std::move(coeffs)), truncation_error_(truncation_error) {}

double GnbsState::norm2() const {
  std::vector<double> p(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), p.begin(), [](cplx c) { return std::norm(c); });
  return quad::pairwise_sum(p);
}

GnbsState make_state(const HypIndex& idx, const DiskPoint& z, double tol) {
  Coefficients c = coefficients(idx, z, tol, 1);
  return GnbsState(idx, z, std::move(c.values), c.tail);
}

cplx overlap(const HypIndex& idx, const DiskPoint& z, const DiskPoint& w) {
  const double sigma = idx.sigma();
  const int m = idx.m();
  const cplx one_minus = 1.0 - z.value() * std::conj(w.value());
  const double lz = std::log1p(-z.norm2());
  const double lw = std::log1p(-w.norm2());
  const double xi = std::exp(lz + lw) / std::norm(one_minus);
  const cplx modulus_phase = std::exp(0.5 * sigma * (lz + lw) - sigma * std::log(one_minus));
  const double jac = sign_pow(m) * specfun::jacobi_p(m, idx.beta(), 0.0, 1.0 - 2.0 * xi);
  return modulus_phase * std::pow(xi, -m) * jac;
}

OverlapSeries overlap_series(const HypIndex& idx, const DiskPoint& z, const DiskPoint& w,
                             double tol) {
  const disk::KernelSeries ks = disk::reproducing_kernel_series(idx, z, w, tol);
  const double scale = std::sqrt(normalization(idx, z) * normalization(idx, w));
  return {ks.value / scale, ks.tail / scale, ks.terms};
}

double continuity_distance(const HypIndex& idx, const DiskPoint& z, const DiskPoint& w) {
  const double re = overlap(idx, z, w).real();
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - re)));
}

PhotonPmf photon_pmf(const HypIndex& idx, const DiskPoint& z, int kmax) {
  if (kmax < 0) throw DomainError("photon_pmf: kmax must be nonnegative");
  const Coefficients c = coefficients(idx, z, 1e-13, kmax + 1);
  PhotonPmf pmf{idx, z.norm2(), {}, 0.0, 0.0, std::nullopt, c.tail};
  pmf.probs.reserve(c.values.size());
  std::vector<double> first;
  std::vector<double> second;
  for (std::size_t k = 0; k < c.values.size(); ++k) {
    const double p = std::norm(c.values[k]);
    pmf.probs.push_back(p);
    first.push_back(static_cast<double>(k) * p);
    second.push_back(static_cast<double>(k) * static_cast<double>(k) * p);
  }
  pmf.mean = quad::pairwise_sum(first);
  pmf.variance = quad::pairwise_sum(second) - pmf.mean * pmf.mean;
  if (pmf.mean > 0.0) pmf.mandel = pmf.variance / pmf.mean - 1.0;
  return pmf;
}

double negative_binomial_pmf(double sigma, double lambda, int k) {
  if (k < 0) return 0.0;
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  const double log_p = sigma * std::log1p(-lambda) + k * std::log(lambda) +
                       specfun::log_gamma(sigma + k) - specfun::log_gamma(sigma) -
                       specfun::log_gamma(k + 1.0);
  return std::exp(log_p);
}

double measure_density(const HypIndex& idx, const DiskPoint& z) {
  const double u = 1.0 - z.norm2();
  return idx.beta() / (std::numbers::pi * u * u);
}

double measure_density_meijer(const HypIndex& idx, const DiskPoint& z) {
  return idx.beta() / std::numbers::pi * specfun::meijer_g1111(-z.norm2(), -1.0, 0.0);
}

IdentityCheck identity_check(const HypIndex& idx, int jk_max, const quad::QuadratureRule& rule) {
  if (jk_max < 0) throw DomainError("identity_check: jk_max must be nonnegative");
  if (rule.domain != quad::Domain::RadialDisk && rule.domain != quad::Domain::TensorDisk) {
    throw DomainError("identity_check: rule must cover the disk");
  }
  const int m = idx.m();
  const double expected = idx.sigma() - 2.0 * m - 2.0;
  if (std::abs(rule.boundary_exponent - expected) > 1e-12) {
    throw DomainError("identity_check: rule absorbs (1-|z|^2)^" +
                      std::to_string(rule.boundary_exponent) + " but level " +
                      std::to_string(m) + " needs exponent " + std::to_string(expected));
  }
  const int n = jk_max + 1;
  const std::size_t nodes = rule.size();

  // (1-|z|^2)^m Phi_k(z) at every node; the weight absorbs the rest.
  std::vector<std::vector<cplx>> f(n, std::vector<cplx>(nodes));
  for (std::size_t i = 0; i < nodes; ++i) {
    const DiskPoint z = rule.domain == quad::Domain::RadialDisk
                            ? DiskPoint(std::sqrt(1.0 - rule.nodes[i]), 0.0)
                            : DiskPoint(rule.nodes[i], rule.nodes_y[i]);
    const double scale = std::pow(1.0 - z.norm2(), m);
    for (int k = 0; k < n; ++k) f[k][i] = disk::basis_phi(idx, k, z).value * scale;
  }

  IdentityCheck out;
  out.residuals.assign(n, std::vector<cplx>(n, 0.0));
  std::vector<double> re(nodes);
  std::vector<double> im(nodes);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (rule.domain == quad::Domain::RadialDisk && j != k) continue;
      for (std::size_t i = 0; i < nodes; ++i) {
        const cplx t = rule.weights[i] * std::conj(f[j][i]) * f[k][i];
        re[i] = t.real();
        im[i] = t.imag();
      }
      const cplx value(quad::pairwise_sum(re), quad::pairwise_sum(im));
      out.residuals[j][k] = value - (j == k ? 1.0 : 0.0);
      out.max_residual = std::max(out.max_residual, std::abs(out.residuals[j][k]));
    }
  }
  return out;
}

}  // namespace hypcs::gnbs
