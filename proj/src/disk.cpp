#include "hypcs/disk.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "series_tail.hpp"

namespace hypcs::disk {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

cplx pow_real(cplx base, double exponent) { return std::exp(exponent * std::log(base)); }

}  // namespace

DiskPoint::DiskPoint(double re, double im) : re_(re), im_(im) {
  if (!std::isfinite(re) || !std::isfinite(im) || !(re * re + im * im < 1.0)) {
    throw DomainError("DiskPoint: (" + std::to_string(re) + ", " + std::to_string(im) +
                      ") is not inside the open unit disk");
  }
}

DiskPoint DiskPoint::polar(double r, double theta) {
  return DiskPoint(r * std::cos(theta), r * std::sin(theta));
}

double DiskPoint::abs() const { return std::hypot(re_, im_); }

HypIndex::HypIndex(double sigma, int m) : sigma_(sigma), m_(m) {
  if (!(sigma > 1.0)) {
    throw DomainError("HypIndex: sigma must exceed 1, got " + std::to_string(sigma));
  }
  if (m < 0) throw DomainError("HypIndex: m must be nonnegative");
  if (!(sigma - 2.0 * m - 1.0 > 0.0)) {
    throw DomainError("HypIndex: level m = " + std::to_string(m) +
                      " needs sigma - 2m - 1 > 0 (sigma = " + std::to_string(sigma) + ")");
  }
}

bool HypIndex::admissible(double sigma, int m) {
  return sigma > 1.0 && m >= 0 && sigma - 2.0 * m - 1.0 > 0.0;
}

int HypIndex::max_level(double sigma) {
  if (!(sigma > 1.0)) return -1;
  int m = static_cast<int>(std::floor((sigma - 1.0) / 2.0));
  while (m >= 0 && !admissible(sigma, m)) --m;
  return m;
}

double bergman_distance(const DiskPoint& z, const DiskPoint& w) {
  const cplx zv = z.value();
  const cplx wv = w.value();
  // cosh^2 d - 1 = |z - w|^2 / ((1-|z|^2)(1-|w|^2)), avoiding cancellation near d = 0.
  const double s = std::norm(zv - wv) / ((1.0 - z.norm2()) * (1.0 - w.norm2()));
  // d = arccosh(sqrt(1 + s)) = arcsinh(sqrt(s)).
  return std::asinh(std::sqrt(s));
}

double eigenvalue_eps(const HypIndex& idx) {
  return 4.0 * idx.m() * (idx.sigma() - idx.m() - 1.0);
}

BasisEval basis_phi(const HypIndex& idx, int k, const DiskPoint& z) {
  if (k < 0) throw DomainError("basis_phi: k must be nonnegative");
  const double sigma = idx.sigma();
  const int m = idx.m();
  const double b = idx.beta();
  const double lam = z.norm2();
  const double x = 1.0 - 2.0 * lam;

  double log_coef;
  double jac;
  int power;       // exponent of |z|
  double phase;    // argument of zbar^{m-k} or z^{k-m}
  double sign;
  const double theta = std::atan2(z.im(), z.re());
  if (k <= m) {
    log_coef = 0.5 * (std::log(b) + specfun::log_gamma(k + 1.0) + specfun::log_gamma(sigma - m) -
                      std::log(std::numbers::pi) - specfun::log_gamma(m + 1.0) -
                      specfun::log_gamma(sigma - 2.0 * m + k));
    jac = specfun::jacobi_p(k, m - k, b, x);
    power = m - k;
    phase = -(m - k) * theta;
    sign = (k % 2 == 0) ? 1.0 : -1.0;
  } else {
    log_coef = 0.5 * (std::log(b) + specfun::log_gamma(m + 1.0) - std::log(std::numbers::pi) -
                      specfun::log_gamma(sigma - m) + specfun::log_gamma(k + sigma - 2.0 * m) -
                      specfun::log_gamma(k + 1.0));
    jac = specfun::jacobi_p(m, k - m, b, x);
    power = k - m;
    phase = (k - m) * theta;
    sign = (m % 2 == 0) ? 1.0 : -1.0;
  }
  if (jac < 0.0) sign = -sign;

  BasisEval out;
  if (jac == 0.0 || (power > 0 && lam == 0.0)) {
    out.value = 0.0;
    out.log_magnitude = -std::numeric_limits<double>::infinity();
    out.truncation_error = 0.0;
    return out;
  }
  const double log_mag = log_coef - m * std::log1p(-lam) +
                         (power > 0 ? 0.5 * power * std::log(lam) : 0.0) +
                         std::log(std::abs(jac));
  const double mag = std::exp(log_mag);
  out.value = std::polar(sign * mag, phase);
  out.log_magnitude = log_mag;
  out.truncation_error = mag * kEps * (16.0 + 4.0 * (m + 1) + std::abs(log_mag) +
                                       std::abs(log_coef));
  return out;
}

cplx reproducing_kernel(const HypIndex& idx, const DiskPoint& z, const DiskPoint& w) {
  const double sigma = idx.sigma();
  const int m = idx.m();
  const cplx one_minus = 1.0 - z.value() * std::conj(w.value());
  const double xi = (1.0 - z.norm2()) * (1.0 - w.norm2()) / std::norm(one_minus);
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  const double jac = sign * specfun::jacobi_p(m, idx.beta(), 0.0, 1.0 - 2.0 * xi);
  return idx.beta() / std::numbers::pi * pow_real(one_minus, -sigma) * std::pow(xi, -m) * jac;
}

cplx reproducing_kernel_2f1(const HypIndex& idx, const DiskPoint& z, const DiskPoint& w) {
  const double sigma = idx.sigma();
  const int m = idx.m();
  const cplx one_minus = 1.0 - z.value() * std::conj(w.value());
  const double prod = (1.0 - z.norm2()) * (1.0 - w.norm2());
  const double mod2 = std::norm(one_minus);
  const double xi = prod / mod2;
  const double gamma_ratio =
      std::exp(specfun::log_gamma(sigma - m) - specfun::log_gamma(m + 1.0) - specfun::log_gamma(sigma - 2.0 * m));
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  const double f21 = specfun::gauss_2f1_terminating(m, sigma - m, sigma - 2.0 * m, xi);
  return idx.beta() / (std::numbers::pi * std::pow(prod, m)) * gamma_ratio * sign *
         std::pow(mod2, m) * pow_real(one_minus, -sigma) * f21;
}

KernelSeries reproducing_kernel_series(const HypIndex& idx, const DiskPoint& z,
                                       const DiskPoint& w, double tol) {
  if (!(tol > 0.0)) throw DomainError("reproducing_kernel_series: tol must be positive");
  const double nz = reproducing_kernel(idx, z, z).real();
  const double nw = reproducing_kernel(idx, w, w).real();
  const double scale = std::sqrt(nz * nw);

  // For k > m the product Phi_k(z) conj Phi_k(w) is
  //   A_k^2 (z wbar)^{k-m} (1-|z|^2)^{-m} (1-|w|^2)^{-m} P_m^{(k-m,b)}(x_z) P_m^{(k-m,b)}(x_w),
  // and A_k^2 (z wbar)^{k-m} is carried by a product recurrence. Evaluating
  // each term from its logarithm and polar angle costs O(k eps) relative per
  // term, which is visible when the kernel is small against its terms.
  const double b = idx.beta();
  const int m = idx.m();
  const cplx zw = z.value() * std::conj(w.value());
  const double xz = 1.0 - 2.0 * z.norm2();
  const double xw = 1.0 - 2.0 * w.norm2();
  const double radial = std::exp(-m * (std::log1p(-z.norm2()) + std::log1p(-w.norm2())));
  // Extended precision for the recurrence: its rounding compounds with k.
  using lcplx = std::complex<long double>;
  lcplx carried = static_cast<long double>(std::exp(std::log(b) + specfun::log_gamma(m + 1.0) - std::log(std::numbers::pi) -
                          specfun::log_gamma(idx.sigma() - m) + specfun::log_gamma(idx.sigma() - m + 1.0) -
                          specfun::log_gamma(m + 2.0))) *
                  lcplx(zw);

  KernelSeries out;
  double sum_re = 0.0;
  double sum_im = 0.0;
  double comp_re = 0.0;
  double comp_im = 0.0;
  auto accumulate = [](double& acc, double& comp, double v) {
    const double t = acc + v;
    comp += std::abs(acc) >= std::abs(v) ? (acc - t) + v : (v - t) + acc;
    acc = t;
  };
  double sz = 0.0;
  double sw = 0.0;
  detail::GeometricTail geo_z;
  detail::GeometricTail geo_w;
  constexpr int kMaxTerms = 1000000;
  for (int k = 0; k < kMaxTerms; ++k) {
    const BasisEval fz = basis_phi(idx, k, z);
    const BasisEval fw = basis_phi(idx, k, w);
    cplx term;
    if (k <= m) {
      term = fz.value * std::conj(fw.value);
    } else {
      const int j = k - m;
      const long double p = static_cast<long double>(radial) * specfun::jacobi_p(m, j, b, xz) *
                            specfun::jacobi_p(m, j, b, xw);
      const lcplx lt = carried * p;
      term = cplx(static_cast<double>(lt.real()), static_cast<double>(lt.imag()));
      carried *= (k + static_cast<long double>(b) + 1.0L) / (k + 1.0L) * lcplx(zw);
    }
    accumulate(sum_re, comp_re, term.real());
    accumulate(sum_im, comp_im, term.imag());
    const double pz = std::norm(fz.value) / nz;
    const double pw = std::norm(fw.value) / nw;
    sz += pz;
    sw += pw;
    // Remaining masses: 1 - sum is only good to the rounding floor, so switch
    // to the geometric estimate once the decay is established.
    const double floor = 4.0 * kEps * (k + 1);
    const double gz = geo_z.push(pz);
    const double gw = geo_w.push(pw);
    const double rz = gz >= 0.0 ? gz : std::max(1.0 - sz, floor);
    const double rw = gw >= 0.0 ? gw : std::max(1.0 - sw, floor);
    const double tail = std::sqrt(rz * rw);
    if (k > idx.m() + 1 && tail <= tol) {
      out.value = cplx(sum_re + comp_re, sum_im + comp_im);
      out.tail = tail * scale;
      out.terms = k + 1;
      return out;
    }
  }
  throw DomainError("reproducing_kernel_series: no convergence within the term limit");
}

cplx apply_delta_sigma_fd(const HypIndex& idx, const Stencil& f, const DiskPoint& z, double h) {
  if (!(h > 0.0)) throw DomainError("apply_delta_sigma_fd: h must be positive");
  const double lam = z.norm2();
  const cplx fxx = (16.0 * (f.east + f.west) - (f.east2 + f.west2) - 30.0 * f.center) / (12.0 * h * h);
  const cplx fyy = (16.0 * (f.north + f.south) - (f.north2 + f.south2) - 30.0 * f.center) / (12.0 * h * h);
  const cplx fx = (8.0 * (f.east - f.west) - (f.east2 - f.west2)) / (12.0 * h);
  const cplx fy = (8.0 * (f.north - f.south) - (f.north2 - f.south2)) / (12.0 * h);
  const cplx d_zzbar = 0.25 * (fxx + fyy);
  const cplx d_zbar = 0.5 * (fx + cplx(0.0, 1.0) * fy);
  return -4.0 * (1.0 - lam) * ((1.0 - lam) * d_zzbar - idx.sigma() * std::conj(z.value()) * d_zbar);
}

cplx apply_delta_sigma_fd(const HypIndex& idx, const std::function<cplx(const DiskPoint&)>& f,
                          const DiskPoint& z, double h) {
  if (!(h > 0.0)) throw DomainError("apply_delta_sigma_fd: h must be positive");
  if (!(z.abs() + 2.0 * h < 1.0)) {
    throw DomainError("apply_delta_sigma_fd: stencil of half-width " + std::to_string(2.0 * h) +
                      " leaves the disk");
  }
  Stencil s;
  s.center = f(z);
  s.east = f(DiskPoint(z.re() + h, z.im()));
  s.west = f(DiskPoint(z.re() - h, z.im()));
  s.north = f(DiskPoint(z.re(), z.im() + h));
  s.south = f(DiskPoint(z.re(), z.im() - h));
  s.east2 = f(DiskPoint(z.re() + 2.0 * h, z.im()));
  s.west2 = f(DiskPoint(z.re() - 2.0 * h, z.im()));
  s.north2 = f(DiskPoint(z.re(), z.im() + 2.0 * h));
  s.south2 = f(DiskPoint(z.re(), z.im() - 2.0 * h));
  return apply_delta_sigma_fd(idx, s, z, h);
}

}  // namespace hypcs::disk
