#include "hypcs/jobs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "hypcs/disk.hpp"
#include "hypcs/gnbs.hpp"
#include "hypcs/husimi.hpp"
#include "hypcs/isotonic.hpp"
#include "hypcs/quad.hpp"

namespace hypcs::jobs {

namespace {

using nlohmann::json;

const std::map<Command, std::string> kNames = {
    {Command::Basis, "basis"},         {Command::Overlap, "overlap"},
    {Command::Photon, "photon"},       {Command::QFunction, "qfunction"},
    {Command::Bound, "bound"},         {Command::Verify, "verify"},
};

struct Schema {
  std::set<std::string> required;
  std::set<std::string> optional;
};

const std::set<std::string> kOutputKeys = {"out", "format", "timing"};

Schema schema_for(Command c) {
  switch (c) {
    case Command::Basis:
      return {{"sigma", "m", "z"}, {"kmax"}};
    case Command::Overlap:
      return {{"sigma", "m", "z", "w"}, {"tol"}};
    case Command::Photon:
      return {{"sigma", "m", "z"}, {"kmax"}};
    case Command::QFunction:
      return {{"sigma", "m", "alpha", "t"}, {"r", "grid-r", "tol"}};
    case Command::Bound:
      return {{"sigma", "alpha", "t", "epsilon"}, {"nodes", "tol"}};
    case Command::Verify:
      return {{"suite"}, {"sigma", "m", "alpha", "t", "epsilon", "z", "tol", "nodes", "kmax"}};
  }
  return {};
}

// Typed, validated access to the raw key-value parameters.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& raw) : raw_(raw) {}

  bool has(const std::string& key) const { return raw_.count(key) > 0; }

  double real(const std::string& key) const {
    const std::string& s = raw_.at(key);
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("--" + key + ": expected a real number, got '" + s + "'");
    }
  }

  double real(const std::string& key, double fallback) const {
    return has(key) ? real(key) : fallback;
  }

  int integer(const std::string& key) const {
    const std::string& s = raw_.at(key);
    try {
      std::size_t pos = 0;
      const long v = std::stol(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return static_cast<int>(v);
    } catch (const std::exception&) {
      throw UsageError("--" + key + ": expected an integer, got '" + s + "'");
    }
  }

  int integer(const std::string& key, int fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? raw_.at(key) : fallback;
  }

  double sigma(double fallback = -1.0) const {
    if (!has("sigma") && fallback > 0.0) return fallback;
    const double s = real("sigma");
    if (!(s > 1.0)) throw UsageError("--sigma: must exceed 1 (got " + raw_.at("sigma") + ")");
    return s;
  }

  disk::HypIndex index(double sigma) const {
    const int m = integer("m");
    if (m < 0) throw UsageError("--m: must be nonnegative");
    if (!disk::HypIndex::admissible(sigma, m)) {
      throw UsageError("--m: level " + std::to_string(m) + " requires sigma - 2m - 1 > 0");
    }
    return disk::HypIndex(sigma, m);
  }

  std::vector<disk::HypIndex> levels(double sigma) const {
    if (has("m")) return {index(sigma)};
    std::vector<disk::HypIndex> out;
    for (int m = 0; m <= disk::HypIndex::max_level(sigma); ++m) out.emplace_back(sigma, m);
    return out;
  }

  double alpha(double fallback = -1.0) const {
    if (!has("alpha") && fallback > 0.0) return fallback;
    const double a = real("alpha");
    if (!(a >= 0.5)) throw UsageError("--alpha: must be at least 0.5");
    return a;
  }

  double time(double fallback = -1.0) const {
    if (!has("t") && fallback > 0.0) return fallback;
    const double t = real("t");
    if (!(t > 0.0)) throw UsageError("--t/--beta: must be positive");
    return t;
  }

  double epsilon(double fallback = -1.0) const {
    if (!has("epsilon") && fallback > 0.0) return fallback;
    const double e = real("epsilon");
    if (!(e > 0.0)) throw UsageError("--epsilon: must be positive");
    return e;
  }

  double tol(double fallback) const {
    const double t = real("tol", fallback);
    if (!(t > 0.0)) throw UsageError("--tol: must be positive");
    return t;
  }

  disk::DiskPoint point(const std::string& key) const { return parse_point(key, raw_.at(key)); }

  static disk::DiskPoint parse_point(const std::string& key, const std::string& s) {
    double a = 0.0;
    double b = 0.0;
    const auto at = s.find('@');
    const auto comma = s.find(',');
    const auto sep = at != std::string::npos ? at : comma;
    if (sep == std::string::npos) {
      throw UsageError("--" + key + ": expected 're,im' or 'r@theta', got '" + s + "'");
    }
    try {
      std::size_t p1 = 0;
      std::size_t p2 = 0;
      const std::string first = s.substr(0, sep);
      const std::string second = s.substr(sep + 1);
      a = std::stod(first, &p1);
      b = std::stod(second, &p2);
      if (p1 != first.size() || p2 != second.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw UsageError("--" + key + ": malformed point '" + s + "'");
    }
    const double re = at != std::string::npos ? a * std::cos(b) : a;
    const double im = at != std::string::npos ? a * std::sin(b) : b;
    if (!(re * re + im * im < 1.0)) {
      throw UsageError("--" + key + ": point must satisfy |z| < 1, got '" + s + "'");
    }
    return disk::DiskPoint(re, im);
  }

 private:
  const std::map<std::string, std::string>& raw_;
};

void validate_keys(const JobSpec& job) {
  const Schema schema = schema_for(job.command);
  for (const auto& [key, value] : job.params) {
    if (!schema.required.count(key) && !schema.optional.count(key) && !kOutputKeys.count(key)) {
      throw UsageError("unknown parameter --" + key + " for command '" +
                       command_name(job.command) + "'");
    }
  }
  for (const std::string& key : schema.required) {
    if (!job.params.count(key)) {
      throw UsageError("missing required parameter --" + key + " for command '" +
                       command_name(job.command) + "'");
    }
  }
}

// Runs body(i) for i in [0, n) on worker threads; results are written by index
// so the assembly order is the grid order.
template <class F>
void parallel_rows(std::size_t n, F body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::exception_ptr failure;
  std::mutex lock;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> guard(lock);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void run_basis(const Params& p, ResultEnvelope& env) {
  const disk::HypIndex idx = p.index(p.sigma());
  const disk::DiskPoint z = p.point("z");
  const int kmax = p.integer("kmax", 10);
  if (kmax < 0) throw UsageError("--kmax: must be nonnegative");
  env.columns = {"k", "re", "im", "abs", "log_magnitude", "truncation_error"};
  double worst = 0.0;
  for (int k = 0; k <= kmax; ++k) {
    const disk::BasisEval e = disk::basis_phi(idx, k, z);
    env.rows.push_back({static_cast<double>(k), e.value.real(), e.value.imag(),
                        std::abs(e.value), e.log_magnitude, e.truncation_error});
    worst = std::max(worst, e.truncation_error);
  }
  env.values["eigenvalue"] = disk::eigenvalue_eps(idx);
  env.meta.truncation_error = worst;
}

void run_overlap(const Params& p, ResultEnvelope& env) {
  const disk::HypIndex idx = p.index(p.sigma());
  const disk::DiskPoint z = p.point("z");
  const disk::DiskPoint w = p.point("w");
  const double tol = p.tol(1e-13);
  const disk::cplx closed = gnbs::overlap(idx, z, w);
  const gnbs::OverlapSeries series = gnbs::overlap_series(idx, z, w, tol);
  env.values["closed_re"] = closed.real();
  env.values["closed_im"] = closed.imag();
  env.values["series_re"] = series.value.real();
  env.values["series_im"] = series.value.imag();
  env.values["series_terms"] = series.terms;
  env.values["abs_diff"] = std::abs(closed - series.value);
  env.values["continuity_distance"] = gnbs::continuity_distance(idx, z, w);
  env.values["bergman_distance"] = disk::bergman_distance(z, w);
  env.meta.truncation_error = series.tail;
}

void run_photon(const Params& p, ResultEnvelope& env) {
  const disk::HypIndex idx = p.index(p.sigma());
  const disk::DiskPoint z = p.point("z");
  const int kmax = p.integer("kmax", 20);
  if (kmax < 0) throw UsageError("--kmax: must be nonnegative");
  const gnbs::PhotonPmf pmf = gnbs::photon_pmf(idx, z, kmax);
  env.columns = {"k", "p"};
  for (int k = 0; k <= kmax; ++k) env.rows.push_back({static_cast<double>(k), pmf.probs[k]});
  env.values["lambda"] = pmf.lambda;
  env.values["mean"] = pmf.mean;
  env.values["variance"] = pmf.variance;
  env.values["mandel"] = pmf.mandel ? json(*pmf.mandel) : json(nullptr);
  env.values["total"] = quad::pairwise_sum(pmf.probs);
  env.meta.truncation_error = pmf.truncation_error;
}

void run_qfunction(const Params& p, ResultEnvelope& env) {
  const disk::HypIndex idx = p.index(p.sigma());
  const isotonic::IsotonicModel model(p.alpha());
  const double t = p.time();
  const double tol = p.tol(1e-13);
  std::vector<double> radii;
  if (p.has("r")) {
    const double r = p.real("r");
    if (!(r >= 0.0 && r < 1.0)) throw UsageError("--r: must lie in [0, 1)");
    radii.push_back(r);
  } else {
    const int n = p.integer("grid-r", 11);
    if (n < 1) throw UsageError("--grid-r: must be positive");
    for (int i = 0; i < n; ++i) radii.push_back(static_cast<double>(i) / n);
  }
  env.columns = {"r", "Q_series", "Q_closed", "abs_diff"};
  env.rows.assign(radii.size(), {});
  std::vector<double> tails(radii.size());
  parallel_rows(radii.size(), [&](std::size_t i) {
    const disk::DiskPoint z(radii[i], 0.0);
    const husimi::QResult s = husimi::q_series(idx, model, t, z, tol);
    const husimi::QResult c = husimi::q_closed(idx, model, t, z);
    env.rows[i] = {radii[i], s.value, c.value, std::abs(s.value - c.value)};
    tails[i] = s.truncation_error;
  });
  env.meta.truncation_error = *std::max_element(tails.begin(), tails.end());
}

void run_bound(const Params& p, ResultEnvelope& env) {
  const double sigma = p.sigma();
  const husimi::ThermoParams params(p.time(), p.epsilon(), p.alpha());
  const int nodes = p.integer("nodes", 200);
  if (nodes < 2) throw UsageError("--nodes: must be at least 2");
  const double tol = p.tol(1e-12);
  const husimi::BestBound best = husimi::best_lower_bound(sigma, params, nodes);
  const husimi::ThermoValue omega = husimi::thermo_potential_exact(params, tol);
  env.columns = {"m", "bound", "quadrature_error", "omega_exact", "gap", "is_best"};
  double worst = omega.error;
  for (const husimi::BoundValue& b : best.per_level) {
    env.rows.push_back({static_cast<double>(b.m), b.value, b.quadrature_error, omega.value,
                        omega.value - b.value, b.m == best.m_star ? 1.0 : 0.0});
    worst = std::max(worst, b.quadrature_error);
  }
  env.values["m_star"] = best.m_star;
  env.values["best_bound"] = best.value;
  env.values["omega_exact"] = omega.value;
  env.values["omega_error"] = omega.error;
  env.values["gap"] = omega.value - best.value;
  env.meta.truncation_error = worst;
  env.meta.quadrature_exactness = 2 * nodes - 1;
}

struct SuiteOutcome {
  double worst = 0.0;
  double threshold = 0.0;
  int cases = 0;
  std::optional<int> exactness;
};

SuiteOutcome suite_orthonormality(const Params& p) {
  const double sigma = p.sigma(9.5);
  const int jk = p.integer("kmax", 10);
  const int nodes = p.integer("nodes", 200);
  SuiteOutcome out{0.0, 1e-8, 0, 2 * nodes - 1};
  for (const disk::HypIndex& idx : p.levels(sigma)) {
    const quad::QuadratureRule rule = quad::radial_disk_rule(sigma - 2.0 * idx.m(), nodes);
    const gnbs::IdentityCheck check = gnbs::identity_check(idx, jk, rule);
    out.worst = std::max(out.worst, check.max_residual);
    out.cases += (jk + 1) * (jk + 1);
  }
  return out;
}

SuiteOutcome suite_overlap(const Params& p) {
  const double sigma = p.sigma(9.5);
  SuiteOutcome out{0.0, 1e-9, 0, std::nullopt};
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto sample = [&] {
    const double r = 0.8 * std::sqrt(unit(rng));
    return disk::DiskPoint::polar(r, 2.0 * 3.141592653589793 * unit(rng));
  };
  for (const disk::HypIndex& idx : p.levels(sigma)) {
    for (int i = 0; i < 200; ++i) {
      const disk::DiskPoint z = sample();
      const disk::DiskPoint w = sample();
      const disk::cplx closed = gnbs::overlap(idx, z, w);
      const gnbs::OverlapSeries series = gnbs::overlap_series(idx, z, w, 1e-17);
      out.worst = std::max(out.worst, std::abs(closed - series.value) / std::abs(series.value));
      out.worst = std::max(out.worst, std::abs(gnbs::overlap(idx, z, z) - 1.0));
      ++out.cases;
    }
  }
  return out;
}

SuiteOutcome suite_qfunction(const Params& p) {
  const double sigma = p.sigma(5.0);
  const isotonic::IsotonicModel model(p.alpha(0.5));
  const double t = p.time(1.0);
  SuiteOutcome out{0.0, 1e-9, 0, std::nullopt};
  const double rs = std::sqrt(std::exp(-t));
  for (const disk::HypIndex& idx : p.levels(sigma)) {
    for (double r : {0.0, 0.3, 0.6, 0.9, rs - 1e-7, rs + 1e-7}) {
      if (!(r < 1.0)) continue;
      const disk::DiskPoint z(r, 0.0);
      const double s = husimi::q_series(idx, model, t, z, 1e-14).value;
      const double c = husimi::q_closed(idx, model, t, z).value;
      out.worst = std::max(out.worst, std::abs(c - s) / (1.0 + s));
      ++out.cases;
    }
  }
  return out;
}

SuiteOutcome suite_heat(const Params& p) {
  const isotonic::IsotonicModel model(p.alpha(0.5));
  const double t = p.time(1.0);
  SuiteOutcome out{0.0, 1e-8, 0, std::nullopt};
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double x = 0.2 + 2.8 * i / 9.0;
      const double y = 0.2 + 2.8 * j / 9.0;
      const double closed = isotonic::heat_kernel(model, t, x, y);
      const double spectral = isotonic::heat_kernel_spectral(model, t, x, y, 200);
      out.worst = std::max(out.worst, std::abs(closed - spectral));
      ++out.cases;
    }
  }
  return out;
}

SuiteOutcome suite_photon(const Params& p) {
  const double sigma = p.sigma(5.0);
  const disk::DiskPoint z = p.has("z") ? p.point("z") : disk::DiskPoint(std::sqrt(0.5), 0.0);
  SuiteOutcome out{0.0, 1e-10, 0, std::nullopt};
  for (const disk::HypIndex& idx : p.levels(sigma)) {
    const gnbs::PhotonPmf pmf = gnbs::photon_pmf(idx, z, 0);
    out.worst = std::max(out.worst, std::abs(quad::pairwise_sum(pmf.probs) - 1.0));
    ++out.cases;
  }
  return out;
}

SuiteOutcome suite_measure(const Params& p) {
  const double sigma = p.sigma(9.5);
  SuiteOutcome out{0.0, 1e-13, 0, std::nullopt};
  for (const disk::HypIndex& idx : p.levels(sigma)) {
    for (int i = 0; i < 50; ++i) {
      const disk::DiskPoint z(0.98 * i / 49.0, 0.0);
      const double a = gnbs::measure_density(idx, z);
      const double b = gnbs::measure_density_meijer(idx, z);
      out.worst = std::max(out.worst, std::abs(a - b) / std::abs(a));
      ++out.cases;
    }
  }
  return out;
}

SuiteOutcome suite_bound(const Params& p) {
  const double sigma = p.sigma(9.5);
  const husimi::ThermoParams params(p.time(1.0), p.epsilon(1.0), p.alpha(1.5));
  const int nodes = p.integer("nodes", 200);
  SuiteOutcome out{0.0, 1e-10, 0, 2 * nodes - 1};
  const husimi::ThermoValue omega = husimi::thermo_potential_exact(params, 1e-14);
  for (const disk::HypIndex& idx : p.levels(sigma)) {
    const husimi::BoundValue b = husimi::berezin_lieb_lower_bound(idx, params, nodes);
    out.worst = std::max(out.worst, std::max(0.0, b.value - omega.value));
    ++out.cases;
  }
  return out;
}

using SuiteFn = SuiteOutcome (*)(const Params&);

const std::map<std::string, SuiteFn>& suites() {
  static const std::map<std::string, SuiteFn> table = {
      {"orthonormality", suite_orthonormality}, {"overlap", suite_overlap},
      {"qfunction", suite_qfunction},           {"heat", suite_heat},
      {"photon", suite_photon},                 {"measure", suite_measure},
      {"bound", suite_bound},
  };
  return table;
}

void run_verify(const Params& p, ResultEnvelope& env) {
  const std::string name = p.text("suite", "");
  const auto it = suites().find(name);
  if (it == suites().end()) throw UsageError("--suite: unknown suite '" + name + "'");
  SuiteOutcome outcome = it->second(p);
  if (p.has("tol")) outcome.threshold = p.tol(1.0);
  const bool passed = outcome.worst <= outcome.threshold;
  env.values["suite"] = name;
  env.values["worst_residual"] = outcome.worst;
  env.values["threshold"] = outcome.threshold;
  env.values["cases"] = outcome.cases;
  env.values["passed"] = passed;
  env.meta.truncation_error = outcome.worst;
  env.meta.quadrature_exactness = outcome.exactness;
  if (!passed) {
    env.exit_code = kTolerance;
    char buf[160];
    std::snprintf(buf, sizeof buf, "suite %s: worst residual %.3e exceeds %.3e", name.c_str(),
                  outcome.worst, outcome.threshold);
    env.message = buf;
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  return std::nullopt;
}

std::string command_name(Command c) { return kNames.at(c); }

std::vector<std::string> verify_suites() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : suites()) names.push_back(name);
  return names;
}

void to_json(json& j, const ResultEnvelope& e) {
  json meta = {{"truncation_error", e.meta.truncation_error},
               {"library_version", e.meta.library_version}};
  meta["quadrature_exactness"] =
      e.meta.quadrature_exactness ? json(*e.meta.quadrature_exactness) : json(nullptr);
  if (e.meta.elapsed_ms) meta["elapsed_ms"] = *e.meta.elapsed_ms;
  j = json{{"command", e.command}, {"params", e.params}, {"values", e.values},
           {"columns", e.columns}, {"rows", e.rows},     {"meta", meta},
           {"exit_code", e.exit_code}, {"message", e.message}};
}

void from_json(const json& j, ResultEnvelope& e) {
  j.at("command").get_to(e.command);
  j.at("params").get_to(e.params);
  e.values = j.at("values");
  j.at("columns").get_to(e.columns);
  j.at("rows").get_to(e.rows);
  const json& meta = j.at("meta");
  meta.at("truncation_error").get_to(e.meta.truncation_error);
  meta.at("library_version").get_to(e.meta.library_version);
  const json& qe = meta.at("quadrature_exactness");
  e.meta.quadrature_exactness = qe.is_null() ? std::nullopt : std::optional<int>(qe.get<int>());
  e.meta.elapsed_ms = meta.contains("elapsed_ms")
                          ? std::optional<double>(meta.at("elapsed_ms").get<double>())
                          : std::nullopt;
  j.at("exit_code").get_to(e.exit_code);
  j.at("message").get_to(e.message);
}

ResultEnvelope run(const JobSpec& job) {
  validate_keys(job);
  const auto start = std::chrono::steady_clock::now();
  const Params p(job.params);
  ResultEnvelope env;
  env.command = command_name(job.command);
  for (const auto& [key, value] : job.params) {
    if (!kOutputKeys.count(key)) env.params[key] = value;
  }
  env.meta.library_version = HYPCS_VERSION;
  try {
    switch (job.command) {
      case Command::Basis: run_basis(p, env); break;
      case Command::Overlap: run_overlap(p, env); break;
      case Command::Photon: run_photon(p, env); break;
      case Command::QFunction: run_qfunction(p, env); break;
      case Command::Bound: run_bound(p, env); break;
      case Command::Verify: run_verify(p, env); break;
    }
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (job.params.count("timing")) {
    env.meta.elapsed_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
  }
  return env;
}

std::string render(const ResultEnvelope& envelope, Format format) {
  if (format == Format::Json) {
    json j = envelope;
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  if (!envelope.rows.empty()) {
    for (std::size_t i = 0; i < envelope.columns.size(); ++i) {
      out << (i ? "," : "") << envelope.columns[i];
    }
    out << "\n";
    for (const auto& row : envelope.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
      out << "\n";
    }
    return out.str();
  }
  bool first = true;
  for (const auto& [key, value] : envelope.values.items()) {
    out << (first ? "" : ",") << key;
    first = false;
  }
  out << "\n";
  first = true;
  for (const auto& [key, value] : envelope.values.items()) {
    out << (first ? "" : ",") << csv_cell(value);
    first = false;
  }
  out << "\n";
  return out.str();
}

}  // namespace hypcs::jobs
