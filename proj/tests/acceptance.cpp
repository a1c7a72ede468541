// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "hypcs/gnbs.hpp"
#include "hypcs/husimi.hpp"
#include "hypcs/isotonic.hpp"
#include "hypcs/quad.hpp"

using namespace hypcs;
using disk::cplx;
using disk::DiskPoint;
using disk::HypIndex;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("%s  %2d  %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<HypIndex> levels(double sigma) {
  std::vector<HypIndex> out;
  for (int m = 0; m <= HypIndex::max_level(sigma); ++m) out.emplace_back(sigma, m);
  return out;
}

// 1. Gram matrix of Phi_0..Phi_10 under the weighted area measure.
void orthonormality() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  double worst_tensor = 0.0;
  for (const HypIndex& idx : levels(9.5)) {
    const double p = idx.sigma() - 2.0 * idx.m();
    worst = std::max(worst, gnbs::identity_check(idx, 10, quad::radial_disk_rule(p, 200)).max_residual);
    // The radial rule zeroes off-diagonals analytically; the tensor rule does not.
    worst_tensor =
        std::max(worst_tensor, gnbs::identity_check(idx, 10, quad::tensor_disk_rule(200, 48, p)).max_residual);
  }
  const double secs = seconds_since(t0);
  report(1, "basis orthonormality, sigma=9.5, m=0..4, j,k<=10",
         worst <= 1e-8 && worst_tensor <= 1e-8 && secs < 30.0,
         fmt("max residual %.2e radial / %.2e tensor (limit 1e-8), %.2f s (limit 30 s)", worst, worst_tensor,
             secs));
}

// 2. Closed-form overlap against the kernel series.
void overlap() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto sample = [&] { return DiskPoint::polar(0.8 * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng)); };
  std::vector<HypIndex> cases = {HypIndex(2.5, 0), HypIndex(5.0, 0), HypIndex(5.0, 1)};
  for (const HypIndex& idx : levels(9.5)) cases.push_back(idx);
  double worst_rel = 0.0;
  double worst_diag = 0.0;
  for (const HypIndex& idx : cases) {
    for (int i = 0; i < 200; ++i) {
      const DiskPoint z = sample();
      const DiskPoint w = sample();
      const cplx closed = gnbs::overlap(idx, z, w);
      const gnbs::OverlapSeries series = gnbs::overlap_series(idx, z, w, 1e-17);
      worst_rel = std::max(worst_rel, std::abs(closed - series.value) / std::abs(series.value));
      worst_diag = std::max(worst_diag, std::abs(gnbs::overlap(idx, z, z) - 1.0));
    }
  }
  report(2, "overlap closed form vs series, 200 pairs per (sigma, m)", worst_rel <= 1e-9 && worst_diag <= 1e-12,
         fmt("max relative difference %.2e (limit 1e-9), max |<z|z> - 1| %.2e (limit 1e-12)", worst_rel,
             worst_diag));
}

// 3. Q closed form vs direct series on the full grid.
void q_equivalence() {
  double worst = 0.0;
  double worst_small_t = 0.0;
  bool bounded = true;
  int points = 0;
  for (double sigma : {2.5, 5.0, 9.5}) {
    for (const HypIndex& idx : levels(sigma)) {
      for (double alpha : {0.5, 1.5, 3.0}) {
        const isotonic::IsotonicModel model(alpha);
        for (double t : {0.1, 0.5, 1.0, 2.0}) {
          const double rs = std::sqrt(std::exp(-t));
          const double cap = std::exp(-(2.0 * alpha + 1.0) * t);
          for (double r : {0.0, 0.3, 0.6, 0.9, rs - 1e-7, rs + 1e-7}) {
            const DiskPoint z(r, 0.0);
            const double s = husimi::q_series(idx, model, t, z, 1e-15).value;
            const double c = husimi::q_closed(idx, model, t, z).value;
            worst = std::max(worst, std::abs(c - s) / (1.0 + s));
            bounded = bounded && c > 0.0 && c <= cap * (1.0 + 1e-12);
            ++points;
          }
          for (double r : {0.0, 0.3, 0.6, 0.9}) {
            const double q0 = husimi::q_closed(idx, model, 1e-8, DiskPoint(r, 0.0)).value;
            worst_small_t = std::max(worst_small_t, std::abs(q0 - 1.0));
          }
        }
      }
    }
  }
  report(3, "Q closed form vs series on the (sigma, m, alpha, t, |z|) grid",
         worst <= 1e-9 && worst_small_t <= 1e-6 && bounded,
         fmt("%.0f points, max |diff|/(1+Q) %.2e (limit 1e-9), max |Q(t=1e-8) - 1| %.2e (limit 1e-6)",
             static_cast<double>(points), worst, worst_small_t) +
             (bounded ? ", 0 < Q <= e^{-(2a+1)t} everywhere" : ", bound 0 < Q <= e^{-(2a+1)t} VIOLATED"));
}

// 4. Ratio of the uncorrected closed form to the corrected one at m = 0.
void printed_ratio() {
  double worst = 0.0;
  for (double sigma : {2.5, 5.0, 9.5}) {
    const HypIndex idx(sigma, 0);
    for (double alpha : {0.5, 1.5, 3.0}) {
      const isotonic::IsotonicModel model(alpha);
      for (double t : {0.1, 0.5, 1.0, 2.0}) {
        const double rs = std::sqrt(std::exp(-t));
        for (double r : {0.0, 0.3, 0.6, 0.9, rs - 1e-7, rs + 1e-7}) {
          const DiskPoint z(r, 0.0);
          const double ratio = husimi::q_printed(idx, model, t, z) / husimi::q_closed(idx, model, t, z).value;
          const double expect = std::numbers::pi * std::pow(1.0 - r * r, sigma) / idx.beta();
          worst = std::max(worst, std::abs(ratio / expect - 1.0));
        }
      }
    }
  }
  report(4, "uncorrected/corrected Q ratio equals pi (1-|z|^2)^sigma/(sigma-2m-1) at m=0", worst <= 1e-10,
         fmt("max relative deviation %.2e (limit 1e-10)", worst));
}

// 5. Lower bound against the exact grand potential.
void berezin_lieb() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_excess = -1e300;
  bool argmax_ok = true;
  std::string per_beta;
  for (double beta : {0.5, 1.0, 2.0}) {
    const husimi::ThermoParams params(beta, 1.0, 1.5);
    const double omega = husimi::thermo_potential_exact(params, 1e-15).value;
    const husimi::BestBound best = husimi::best_lower_bound(9.5, params, 200);
    double top = -1e300;
    int arg = -1;
    for (const husimi::BoundValue& b : best.per_level) {
      worst_excess = std::max(worst_excess, b.value - omega);
      if (b.value > top) {
        top = b.value;
        arg = b.m;
      }
    }
    argmax_ok = argmax_ok && best.value == top && best.m_star == arg && best.per_level.size() == 5;
    per_beta += fmt(" beta=%.1f: m*=%.0f gap=%.3e;", beta, best.m_star, omega - best.value);
  }
  const double secs = seconds_since(t0);
  report(5, "Berezin-Lieb lower bound, sigma=9.5, alpha=1.5, eps=1",
         worst_excess <= 1e-10 && argmax_ok && secs < 60.0,
         fmt("max(bound - Omega) %.3e (limit 1e-10), %.2f s (limit 60 s);", worst_excess, secs) + per_beta +
             (argmax_ok ? " best = enumerated max" : " best != enumerated max"));
}

// 6. Closed heat kernel vs spectral sum, and the semigroup property.
void heat_kernel() {
  double worst = 0.0;
  double worst_ck = 0.0;
  const quad::QuadratureRule rule = quad::semiinfinite_rule(12.0, 40);
  for (double alpha : {0.5, 1.5}) {
    const isotonic::IsotonicModel model(alpha);
    for (double t : {0.25, 1.0}) {
      for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
          const double x = 0.2 + 2.8 * i / 9.0;
          const double y = 0.2 + 2.8 * j / 9.0;
          const double w = isotonic::heat_kernel(model, t, x, y);
          worst = std::max(worst, std::abs(w - isotonic::heat_kernel_spectral(model, t, x, y, 200)));
          if ((i + j) % 3 == 0) {
            const double ck = rule.integrate([&](double s) {
              return isotonic::heat_kernel(model, 0.5 * t, x, s) * isotonic::heat_kernel(model, 0.5 * t, s, y);
            });
            worst_ck = std::max(worst_ck, std::abs(ck - w));
          }
        }
      }
    }
  }
  report(6, "heat kernel closed form vs spectral sum (K=200)", worst <= 1e-8 && worst_ck <= 1e-6,
         fmt("max |W - spectral| %.2e (limit 1e-8), Chapman-Kolmogorov residual %.2e (limit 1e-6)", worst,
             worst_ck));
}

// 7. Finite-difference eigen-residuals. L: relative to the sup of the exact side on the sample.
// Delta_sigma: pointwise |res|/(1+|Phi|), and separately relative to max(eps,1) sup|Phi|.
void eigen_residuals() {
  double worst_l = 0.0;
  for (double alpha : {0.5, 1.5, 3.0}) {
    const isotonic::IsotonicModel model(alpha);
    for (int k = 0; k <= 8; ++k) {
      auto psi = [&](double x) { return isotonic::eigenfunction_psi(model, k, x); };
      const double lam = isotonic::operator_eigenvalue(model, k);
      double res = 0.0;
      double scale = 0.0;
      for (int i = 0; i <= 100; ++i) {
        const double x = 0.5 + 2.5 * i / 100.0;
        res = std::max(res, std::abs(isotonic::apply_hamiltonian_fd(model, psi, x, 1e-3) - lam * psi(x)));
        scale = std::max(scale, std::abs(lam * psi(x)));
      }
      worst_l = std::max(worst_l, res / scale);
    }
  }
  double worst_d = 0.0;
  double worst_point = 0.0;
  for (const HypIndex& idx : levels(9.5)) {
    const double eps = disk::eigenvalue_eps(idx);
    for (int k = 0; k <= 8; ++k) {
      auto f = [&](const DiskPoint& p) { return disk::basis_phi(idx, k, p).value; };
      double res = 0.0;
      double scale = 0.0;
      for (int i = 1; i <= 8; ++i) {
        for (int j = 0; j < 6; ++j) {
          const DiskPoint z = DiskPoint::polar(0.1 * i, 2.0 * std::numbers::pi * j / 6.0 + 0.3);
          const double r = std::abs(disk::apply_delta_sigma_fd(idx, f, z, 1e-4) - eps * f(z));
          res = std::max(res, r);
          scale = std::max(scale, std::max(eps, 1.0) * std::abs(f(z)));
          worst_point = std::max(worst_point, r / (1.0 + std::abs(f(z))));
        }
      }
      worst_d = std::max(worst_d, res / scale);
    }
  }
  report(7, "finite-difference eigen-residuals", worst_l <= 5e-5 && worst_d <= 1e-4 && worst_point <= 1e-4,
         fmt("L_alpha (h=1e-3, k<=8, x in [0.5,3]) %.2e (limit 5e-5); Delta_sigma (h=1e-4, |z|<=0.8) pointwise "
             "|res|/(1+|Phi|) %.2e, sup-relative %.2e (limit 1e-4 each)",
             worst_l, worst_point, worst_d));
}

// 8. Photon-number distribution.
void photon() {
  double worst_sum = 0.0;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double sigma : {2.5, 5.0, 9.5}) {
    for (const HypIndex& idx : levels(sigma)) {
      for (int i = 0; i < 20; ++i) {
        const DiskPoint z = DiskPoint::polar(0.95 * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
        const gnbs::PhotonPmf pmf = gnbs::photon_pmf(idx, z, 0);
        worst_sum = std::max(worst_sum, std::abs(quad::pairwise_sum(pmf.probs) - 1.0));
      }
    }
  }
  double worst_nb = 0.0;
  for (double sigma : {2.5, 5.0, 9.5}) {
    for (double lambda : {0.05, 0.3, 0.5, 0.8}) {
      const gnbs::PhotonPmf pmf = gnbs::photon_pmf(HypIndex(sigma, 0), DiskPoint(std::sqrt(lambda), 0.0), 60);
      double p = std::pow(1.0 - lambda, sigma);
      for (int k = 0; k <= 60; ++k) {
        if (k > 0) p *= (sigma + k - 1.0) / k * lambda;
        worst_nb = std::max(worst_nb, std::abs(pmf.probs[k] - p));
      }
    }
  }
  double worst_mandel = 0.0;
  for (double sigma : {2.5, 5.0, 9.5}) {
    const gnbs::PhotonPmf pmf = gnbs::photon_pmf(HypIndex(sigma, 0), DiskPoint(std::sqrt(0.5), 0.0), 0);
    worst_mandel = std::max(worst_mandel, pmf.mandel ? std::abs(*pmf.mandel - 1.0) : 1.0);
  }
  report(8, "photon statistics", worst_sum <= 1e-10 && worst_nb <= 1e-12 && worst_mandel <= 1e-9,
         fmt("max |sum p - 1| %.2e (limit 1e-10), m=0 vs negative binomial %.2e (limit 1e-12), "
             "|Mandel - 1| at lambda=0.5 %.2e (limit 1e-9)",
             worst_sum, worst_nb, worst_mandel));
}

// 9. Measure density in two forms.
void measure() {
  double worst = 0.0;
  for (double sigma : {2.5, 5.0, 9.5}) {
    for (const HypIndex& idx : levels(sigma)) {
      for (int i = 0; i < 50; ++i) {
        const DiskPoint z(0.98 * i / 49.0, 0.0);
        const double a = gnbs::measure_density(idx, z);
        worst = std::max(worst, std::abs(a - gnbs::measure_density_meijer(idx, z)) / a);
      }
    }
  }
  report(9, "measure density vs Meijer-G form on a 50-point radial grid", worst <= 1e-13,
         fmt("max relative difference %.2e (limit 1e-13)", worst));
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HYPCS_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 10. Command-line determinism and failing verification.
void cli() {
  const auto dir = std::filesystem::temp_directory_path() / "hypcs_acceptance";
  std::filesystem::create_directories(dir);
  const std::vector<std::string> jobs = {
      "qfunction --sigma 9.5 --m 2 --alpha 1.5 --t 0.5 --grid-r 24",
      "qfunction --sigma 5 --m 1 --alpha 0.5 --beta 1 --grid-r 16 --format csv",
      "bound --sigma 5 --alpha 1.5 --beta 1 --epsilon 1",
      "overlap --sigma 9.5 --m 3 --z 0.3,0.2 --w 0.6@2.5",
      "photon --sigma 5 --m 1 --z 0.5,0.5 --kmax 20 --format csv",
  };
  int identical = 0;
  int i = 0;
  for (const std::string& job : jobs) {
    const auto a = dir / ("a" + std::to_string(i) + ".out");
    const auto b = dir / ("b" + std::to_string(i) + ".out");
    ++i;
    const int ra = run_cli(job + " --out " + a.string());
    const int rb = run_cli(job + " --out " + b.string());
    const std::string sa = slurp(a);
    if (ra == 0 && rb == 0 && !sa.empty() && sa == slurp(b)) ++identical;
  }
  const int pass_code = run_cli("verify --suite orthonormality --sigma 9.5 --out " + (dir / "v.json").string());
  const int tight_code =
      run_cli("verify --suite qfunction --tol 1e-30 --out " + (dir / "vt.json").string());
  const int usage_code = run_cli("basis --sigma 5 --m 2 --z 0,0");
  std::filesystem::remove_all(dir);
  const bool ok = identical == static_cast<int>(jobs.size()) && pass_code == 0 && tight_code == 3 &&
                  usage_code == 2;
  report(10, "CLI determinism and verify exit codes", ok,
         fmt("%.0f/%.0f repeated jobs bit-identical; ", identical, static_cast<double>(jobs.size())) +
             fmt("verify exit %.0f at default tolerance, %.0f with --tol 1e-30; usage error exit %.0f", pass_code,
                 tight_code, usage_code));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria = {orthonormality, overlap,         q_equivalence, printed_ratio,
                                                       berezin_lieb,   heat_kernel,     eigen_residuals, photon,
                                                       measure,        cli};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("FAIL  criterion raised: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
