#include "hypcs/husimi.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <string>

#include "hypcs/gnbs.hpp"
#include "hypcs/quad.hpp"
#include "series_tail.hpp"

namespace hypcs::husimi {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_time(double t) {
  if (!(t > 0.0)) throw DomainError("husimi: t must be positive, got " + std::to_string(t));
}

double ground_factor(const IsotonicModel& model, double t) {
  return std::exp(-t * isotonic::eigenvalue_lambda(model, 0));
}

// Q(1 - u) / u^{sigma - 2m}: the part of Q left after removing its boundary power.
double q_closed_reduced(const HypIndex& idx, double e0, double q, double u) {
  const double sigma = idx.sigma();
  const int m = idx.m();
  const double lam = 1.0 - u;
  const double one_minus_lq = 1.0 - lam * q;
  const double v = -u * u * q / one_minus_lq;
  const double d = lam - q;
  double coef = 1.0;
  std::vector<double> terms;
  terms.reserve(m + 1);
  for (int s = 0; s <= m; ++s) {
    if (s > 0) coef *= (s - 1.0 - m) * (sigma - m + s - 1.0) / ((sigma - 2.0 * m + s - 1.0) * s);
    terms.push_back(coef * std::pow(d, m - s) * std::pow(v, s));
  }
  const double sum = quad::pairwise_sum(terms);
  const double gamma_ratio = std::exp(specfun::log_gamma(sigma - m) - specfun::log_gamma(m + 1.0) -
                                      specfun::log_gamma(sigma - 2.0 * m));
  return e0 * std::pow(one_minus_lq, m - sigma) * gamma_ratio * sum;
}

}  // namespace

QResult q_series(const HypIndex& idx, const IsotonicModel& model, double t, const DiskPoint& z,
                 double tol) {
  require_time(t);
  if (!(tol > 0.0)) throw DomainError("q_series: tol must be positive");
  const double e0 = ground_factor(model, t);
  const double q = std::exp(-t);
  const double inv_n = 1.0 / gnbs::normalization(idx, z);
  std::vector<double> terms;
  double mass = 0.0;
  double qk = 1.0;
  double prev = 0.0;
  detail::GeometricTail geometric;
  for (int k = 0; k < 1000000; ++k) {
    const double p = std::norm(disk::basis_phi(idx, k, z).value) * inv_n;
    terms.push_back(qk * p);
    mass += p;
    qk *= q;
    const double remaining = std::max(1.0 - mass, 4.0 * kEps * (k + 1));
    double tail = e0 * qk * remaining;
    bool negligible = false;
    const double weighted = geometric.push(qk * p / q);
    if (k > idx.m() + 1 && weighted >= 0.0) {
      const double geo = e0 * weighted;
      if (geo < 1e-3 * kEps * e0) {
        negligible = true;
        tail = std::min(tail, geo);
      }
    }
    if (k > idx.m() && p == 0.0 && prev == 0.0) {
      negligible = true;
      tail = 0.0;
    }
    prev = p;
    if (k >= idx.m() && (tail <= tol || negligible)) {
      return {e0 * quad::pairwise_sum(terms), QMethod::Series, tail};
    }
  }
  throw DomainError("q_series: no convergence within the term limit");
}

QResult q_closed(const HypIndex& idx, const IsotonicModel& model, double t, const DiskPoint& z) {
  require_time(t);
  const double u = 1.0 - z.norm2();
  const double reduced = q_closed_reduced(idx, ground_factor(model, t), std::exp(-t), u);
  const double value = reduced * std::pow(u, idx.sigma() - 2.0 * idx.m());
  return {value, QMethod::Closed, 0.0};
}

double q_printed(const HypIndex& idx, const IsotonicModel& model, double t, const DiskPoint& z) {
  require_time(t);
  const double sigma = idx.sigma();
  const int m = idx.m();
  const double lam = z.norm2();
  const double q = std::exp(-t);
  const double u = 1.0 - lam;
  const double one_minus_lq = 1.0 - lam * q;
  const double a = (lam - q) * one_minus_lq;
  const double jac = specfun::jacobi_p(m, sigma - 2.0 * m, 0.0, 1.0 + 2.0 * q * u * u / a);
  return std::numbers::pi * std::pow(u, sigma) * ground_factor(model, t) / idx.beta() *
         std::pow(a / (u * u), m) * std::pow(u / one_minus_lq, sigma) * jac;
}

ThermoParams::ThermoParams(double b, double e, double a) : beta(b), epsilon(e), alpha(a) {
  if (!(b > 0.0)) throw DomainError("ThermoParams: beta must be positive");
  if (!(e > 0.0)) throw DomainError("ThermoParams: epsilon must be positive");
  if (!(a >= 0.5)) throw DomainError("ThermoParams: alpha must be at least 1/2");
}

ThermoValue thermo_potential_exact(const ThermoParams& params, double tol) {
  if (!(tol > 0.0)) throw DomainError("thermo_potential_exact: tol must be positive");
  const IsotonicModel model(params.alpha);
  const double beta = params.beta;
  const double spacing = 1.0 - std::exp(-beta);
  std::vector<double> terms;
  double partial = 0.0;
  for (int k = 0; k < 10000000; ++k) {
    const double x = params.epsilon * std::exp(-beta * isotonic::eigenvalue_lambda(model, k));
    const double term = std::log1p(x);
    terms.push_back(term);
    partial += term;
    // ln(1+x) <= x, so the rest is bounded by a geometric series.
    const double tail = x * std::exp(-beta) / spacing;
    if (term < tol * partial && tail < tol * partial) {
      return {-quad::pairwise_sum(terms) / beta, tail / beta};
    }
    if (x == 0.0) return {-quad::pairwise_sum(terms) / beta, 0.0};
  }
  throw DomainError("thermo_potential_exact: no convergence");
}

BoundValue berezin_lieb_lower_bound(const HypIndex& idx, const ThermoParams& params,
                                    const quad::QuadratureRule& rule, double tol) {
  const double power = idx.sigma() - 2.0 * idx.m();
  if (rule.domain != quad::Domain::RadialDisk || std::abs(rule.boundary_exponent - (power - 2.0)) > 1e-12) {
    throw DomainError("berezin_lieb_lower_bound: need a radial disk rule with boundary exponent sigma-2m-2 = " +
                      std::to_string(power - 2.0));
  }
  if (rule.size() < 2) throw DomainError("berezin_lieb_lower_bound: need at least two nodes");
  const IsotonicModel model(params.alpha);
  const double beta = params.beta;
  const double e0 = ground_factor(model, beta);
  const double q = std::exp(-beta);

  // dmu = (sigma-2m-1)/(pi u^2) dnu; the rule supplies u^{power-2} dnu.
  auto integrate = [&](const quad::QuadratureRule& r) {
    return r.integrate([&](double u) {
      const double reduced = q_closed_reduced(idx, e0, q, u);
      const double up = std::pow(u, power);
      const double eq = params.epsilon * reduced * up;
      // ln(1 + eq) / u^power, keeping the ratio accurate when eq is tiny.
      const double ratio = eq > 1e-8 ? std::log1p(eq) / up
                                     : params.epsilon * reduced * (1.0 - 0.5 * eq + eq * eq / 3.0);
      return -idx.beta() / (std::numbers::pi * beta) * ratio;
    });
  };
  const double full = integrate(rule);
  const double half = integrate(quad::radial_disk_rule(power, static_cast<int>(rule.size()) / 2));
  BoundValue out{idx.m(), full, std::abs(full - half)};
  if (!(out.quadrature_error <= tol * std::max(1.0, std::abs(full)))) {
    throw DomainError("berezin_lieb_lower_bound: radial quadrature not converged (change " +
                      std::to_string(out.quadrature_error) + " on halving the rule)");
  }
  return out;
}

BoundValue berezin_lieb_lower_bound(const HypIndex& idx, const ThermoParams& params, int nodes,
                                    double tol) {
  if (nodes < 2) throw DomainError("berezin_lieb_lower_bound: need at least two nodes");
  return berezin_lieb_lower_bound(idx, params, quad::radial_disk_rule(idx.sigma() - 2.0 * idx.m(), nodes), tol);
}

BestBound best_lower_bound(double sigma, const ThermoParams& params, int nodes, double tol) {
  const int top = HypIndex::max_level(sigma);
  if (top < 0) {
    throw DomainError("best_lower_bound: no admissible level for sigma = " + std::to_string(sigma));
  }
  std::vector<std::future<BoundValue>> jobs;
  for (int m = 0; m <= top; ++m) {
    jobs.push_back(std::async(std::launch::async, [=, &params] {
      return berezin_lieb_lower_bound(HypIndex(sigma, m), params, nodes, tol);
    }));
  }
  BestBound best;
  for (auto& job : jobs) best.per_level.push_back(job.get());
  best.m_star = 0;
  best.value = best.per_level.front().value;
  for (const BoundValue& b : best.per_level) {
    if (b.value > best.value) {
      best.value = b.value;
      best.m_star = b.m;
    }
  }
  return best;
}

}  // namespace hypcs::husimi
