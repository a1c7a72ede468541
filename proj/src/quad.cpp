#include "hypcs/quad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "hypcs/specfun.hpp"

namespace hypcs::quad {

namespace {

double pairwise_sum_range(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_range(v, half) + pairwise_sum_range(v + half, n - half);
}

// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_range(values.data(), values.size());
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  QuadratureRule rule;
  rule.domain = Domain::Interval;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.exactness_degree = 2 * n - 1;
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
    return rule;
  }
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      auto [p, d] = legendre_with_derivative(n, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    dp = legendre_with_derivative(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  rule.lower = a;
  rule.upper = b;
  return rule;
}

QuadratureRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw DomainError("gauss_jacobi: n must be positive");
  if (!(alpha > -1.0) || !(beta > -1.0)) {
    throw DomainError("gauss_jacobi: exponents must exceed -1");
  }
  const double ab = alpha + beta;

  // Golub-Welsch: eigenvalues of the symmetric Jacobi matrix give starting nodes.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 1));
  diag(0) = (beta - alpha) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    double b2;
    if (k == 1) {
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(k - 1) = std::sqrt(b2);
  }
  std::vector<double> x(n);
  if (n == 1) {
    x[0] = diag(0);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
    for (int i = 0; i < n; ++i) x[i] = solver.eigenvalues()(i);
  }

  // Newton polish on P_n^{(alpha,beta)}, then weights from the derivative.
  const double log_const = (ab + 1.0) * std::numbers::ln2 + specfun::log_gamma(n + alpha + 1.0) +
                           specfun::log_gamma(n + beta + 1.0) - specfun::log_gamma(n + ab + 1.0) -
                           specfun::log_gamma(n + 1.0);
  auto derivative = [&](double t) {
    return 0.5 * (n + ab + 1.0) * specfun::jacobi_p(n - 1, alpha + 1.0, beta + 1.0, t);
  };
  QuadratureRule rule;
  rule.domain = Domain::Interval;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.exactness_degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    double t = x[i];
    for (int iter = 0; iter < 8; ++iter) {
      const double dt = specfun::jacobi_p(n, alpha, beta, t) / derivative(t);
      const double next = t - dt;
      if (!(next > -1.0 && next < 1.0)) break;
      t = next;
      if (std::abs(dt) < 1e-16) break;
    }
    const double d = derivative(t);
    rule.nodes[i] = t;
    rule.weights[i] =
        std::exp(log_const - std::log1p(-t) - std::log1p(t) - 2.0 * std::log(std::abs(d)));
  }
  return rule;
}

QuadratureRule radial_disk_rule(double sigma, int n) {
  if (!(sigma > 1.0)) throw DomainError("radial_disk_rule: sigma must exceed 1");
  const double p = sigma - 2.0;
  // u = (1 + x)/2 maps (1+x)^p on [-1,1] to u^p on (0,1) with factor 2^{-p-1}.
  QuadratureRule base = gauss_jacobi(n, 0.0, p);
  const double scale = std::numbers::pi * std::exp(-(p + 1.0) * std::numbers::ln2);
  QuadratureRule rule;
  rule.domain = Domain::RadialDisk;
  rule.lower = 0.0;
  rule.upper = 1.0;
  rule.boundary_exponent = p;
  rule.exactness_degree = base.exactness_degree;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = 0.5 * (1.0 + base.nodes[i]);
    rule.weights[i] = scale * base.weights[i];
  }
  return rule;
}

QuadratureRule tensor_disk_rule(int nr, int ntheta, double sigma) {
  if (nr < 1 || ntheta < 1) throw DomainError("tensor_disk_rule: sizes must be positive");
  const QuadratureRule radial = radial_disk_rule(sigma, nr);
  QuadratureRule rule;
  rule.domain = Domain::TensorDisk;
  rule.lower = 0.0;
  rule.upper = 1.0;
  rule.boundary_exponent = radial.boundary_exponent;
  rule.exactness_degree = std::min(radial.exactness_degree, ntheta - 1);
  rule.nodes.reserve(static_cast<std::size_t>(nr) * ntheta);
  rule.nodes_y.reserve(rule.nodes.capacity());
  rule.weights.reserve(rule.nodes.capacity());
  for (int i = 0; i < nr; ++i) {
    const double r = std::sqrt(1.0 - radial.nodes[i]);
    for (int j = 0; j < ntheta; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / ntheta;
      rule.nodes.push_back(r * std::cos(theta));
      rule.nodes_y.push_back(r * std::sin(theta));
      rule.weights.push_back(radial.weights[i] / ntheta);
    }
  }
  return rule;
}

QuadratureRule semiinfinite_rule(double X, int n) {
  if (!(X > 0.0)) throw DomainError("semiinfinite_rule: cutoff must be positive");
  if (n < 1) throw DomainError("semiinfinite_rule: n must be positive");
  const int panels = std::max(1, static_cast<int>(std::ceil(X)));
  const double width = X / panels;
  const QuadratureRule base = gauss_legendre(n);
  QuadratureRule rule;
  rule.domain = Domain::SemiInfinite;
  rule.lower = 0.0;
  rule.upper = X;
  rule.exactness_degree = base.exactness_degree;
  rule.tail_bound = std::sqrt(std::numbers::pi / 2.0) * std::erfc(X / std::numbers::sqrt2);
  for (int p = 0; p < panels; ++p) {
    const double a = p * width;
    for (int i = 0; i < n; ++i) {
      rule.nodes.push_back(a + 0.5 * width * (1.0 + base.nodes[i]));
      rule.weights.push_back(0.5 * width * base.weights[i]);
    }
  }
  return rule;
}

}  // namespace hypcs::quad
