#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hypcs/quad.hpp"
#include "hypcs/specfun.hpp"

using namespace hypcs;
using namespace hypcs::quad;

namespace {

// Beta-function moment: int_{-1}^{1} (1-x)^a (1+x)^b dx.
double jacobi_mass(double a, double b) {
  return std::exp((a + b + 1.0) * std::numbers::ln2 + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                  std::lgamma(a + b + 2.0));
}

}  // namespace

TEST_CASE("pairwise_sum") {
  std::vector<double> v(1000, 0.1);
  CHECK(std::abs(pairwise_sum(v) - 100.0) < 1e-12);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("gauss_legendre integrates polynomials through degree 2n-1") {
  for (int n : {1, 2, 5, 17, 64}) {
    const QuadratureRule rule = gauss_legendre(n);
    CHECK(rule.exactness_degree == 2 * n - 1);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1.0);
      const double got = rule.integrate([d](double x) { return std::pow(x, d); });
      INFO("n=" << n << " d=" << d);
      CHECK(std::abs(got - exact) < 1e-14);
    }
  }
  const QuadratureRule mapped = gauss_legendre(8, 1.0, 3.0);
  CHECK(std::abs(mapped.integrate([](double x) { return x * x; }) - 26.0 / 3.0) < 1e-13);
}

TEST_CASE("property: gauss_jacobi reproduces Jacobi-weight moments") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> param(-0.9, 12.0);
  for (int trial = 0; trial < 60; ++trial) {
    const double a = param(rng);
    const double b = param(rng);
    const int n = 2 + trial % 30;
    const QuadratureRule rule = gauss_jacobi(n, a, b);
    double mass = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      mass += w;
    }
    INFO("n=" << n << " a=" << a << " b=" << b);
    CHECK(std::abs(mass / jacobi_mass(a, b) - 1.0) < 1e-12);
    // int (1-x)^a (1+x)^b (1+x)^j dx = jacobi_mass(a, b + j)
    for (int j = 1; j <= std::min(2 * n - 1, 12); ++j) {
      const double got = rule.integrate([j](double x) { return std::pow(1.0 + x, j); });
      CHECK(std::abs(got / jacobi_mass(a, b + j) - 1.0) < 1e-11);
    }
  }
}

TEST_CASE("gauss_jacobi nodes are the zeros of P_n") {
  const QuadratureRule rule = gauss_jacobi(12, 0.0, 7.5);
  for (double x : rule.nodes) {
    CHECK(std::abs(specfun::jacobi_p(12, 0.0, 7.5, x)) < 1e-10 * specfun::jacobi_at_one(12, 7.5, 0.0));
  }
  CHECK_THROWS_AS(gauss_jacobi(0, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(gauss_jacobi(4, -1.0, 0.0), DomainError);
}

TEST_CASE("radial_disk_rule integrates against (1-|z|^2)^{sigma-2} dnu") {
  for (double sigma : {1.5, 2.5, 5.0, 9.5}) {
    const QuadratureRule rule = radial_disk_rule(sigma, 40);
    CHECK(rule.domain == Domain::RadialDisk);
    CHECK(rule.boundary_exponent == doctest::Approx(sigma - 2.0));
    // int_D (1-|z|^2)^{sigma-2} |z|^{2j} dnu = pi B(j+1, sigma-1)
    for (int j = 0; j < 10; ++j) {
      const double exact = std::numbers::pi * std::exp(std::lgamma(j + 1.0) + std::lgamma(sigma - 1.0) -
                                                        std::lgamma(j + sigma));
      const double got = rule.integrate([j](double u) { return std::pow(1.0 - u, j); });
      INFO("sigma=" << sigma << " j=" << j);
      CHECK(std::abs(got / exact - 1.0) < 1e-12);
    }
  }
  CHECK_THROWS_AS(radial_disk_rule(1.0, 10), DomainError);
}

TEST_CASE("tensor_disk_rule matches the radial rule on monomials") {
  const double sigma = 4.5;
  const QuadratureRule tensor = tensor_disk_rule(20, 16, sigma);
  CHECK(tensor.domain == Domain::TensorDisk);
  CHECK(tensor.nodes.size() == tensor.nodes_y.size());
  const double radial = radial_disk_rule(sigma, 20).integrate([](double u) { return (1.0 - u) * (1.0 - u); });
  const double got = tensor.integrate([](double x, double y) {
    const double r2 = x * x + y * y;
    return r2 * r2;
  });
  CHECK(std::abs(got - radial) < 1e-13);
  // z^3 averages to zero over the angle
  const double odd = tensor.integrate([](double x, double y) { return x * x * x - 3.0 * x * y * y; });
  CHECK(std::abs(odd) < 1e-14);
}

TEST_CASE("semiinfinite_rule panels and tail") {
  const QuadratureRule rule = semiinfinite_rule(10.0, 20);
  CHECK(rule.domain == Domain::SemiInfinite);
  CHECK(rule.size() == 200);
  const double gauss = rule.integrate([](double x) { return std::exp(-0.5 * x * x); });
  CHECK(std::abs(gauss - std::sqrt(std::numbers::pi / 2.0)) < 1e-14);
  CHECK(rule.tail_bound > 0.0);
  CHECK(rule.tail_bound < 1e-22);
  CHECK(std::abs(rule.tail_bound - std::sqrt(std::numbers::pi / 2.0) * std::erfc(10.0 / std::numbers::sqrt2)) <
        1e-30);
}

TEST_CASE("small worked values") {
  const QuadratureRule one = gauss_legendre(1);
  CHECK(one.nodes[0] == 0.0);
  CHECK(one.weights[0] == doctest::Approx(2.0).epsilon(1e-15));
  const QuadratureRule two = gauss_legendre(2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(std::abs(std::abs(two.nodes[i]) - 1.0 / std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(two.weights[i] - 1.0) < 1e-15);
  }
  CHECK(std::abs(gauss_legendre(3).integrate([](double x) { return x * x * x * x; }) - 0.4) < 1e-15);
  CHECK_THROWS_AS(gauss_legendre(0), DomainError);

  const QuadratureRule r = radial_disk_rule(5.0, 10);
  CHECK(std::abs(r.integrate([](double) { return 1.0; }) - std::numbers::pi / 4.0) < 1e-14);
  // int |z|^6 (1-|z|^2)^3 dnu = pi 3! Gamma(4) / Gamma(8)
  CHECK(std::abs(r.integrate([](double u) { return std::pow(1.0 - u, 3); }) - std::numbers::pi * 36.0 / 5040.0) <
        1e-14);

  const QuadratureRule s = semiinfinite_rule(8.0, 20);
  CHECK(std::abs(s.integrate([](double x) { return std::exp(-x * x); }) - std::sqrt(std::numbers::pi) / 2.0) <
        1e-12);
  CHECK(std::abs(s.integrate([](double) { return 1.0; }) - 8.0) < 1e-13);
  for (double w : s.weights) CHECK(w > 0.0);
}

TEST_CASE("doubling the node count leaves exact integrals unchanged") {
  const auto poly = [](double u) { return std::pow(1.0 - u, 5) + 3.0 * u; };
  const double a = radial_disk_rule(3.5, 12).integrate(poly);
  const double b = radial_disk_rule(3.5, 24).integrate(poly);
  CHECK(std::abs(a - b) < 1e-13);
}
