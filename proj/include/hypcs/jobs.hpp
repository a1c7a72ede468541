#pragma once

// Batch job layer behind the command-line tool: parameter validation,
// dispatch to the library, and the JSON/CSV result envelope.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace hypcs::jobs {

enum class Command { Basis, Overlap, Photon, QFunction, Bound, Verify };

std::optional<Command> parse_command(const std::string& name);
std::string command_name(Command c);

enum ExitCode : int { kSuccess = 0, kUsage = 2, kTolerance = 3 };

/// Invalid or missing parameters; the message names the violated constraint.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct JobSpec {
  Command command = Command::Basis;
  /// Flag name without dashes -> raw value, e.g. {"sigma", "9.5"}, {"z", "0.1,0.2"}.
  std::map<std::string, std::string> params;
};

struct Meta {
  double truncation_error = 0.0;
  std::optional<int> quadrature_exactness;
  std::string library_version;
  std::optional<double> elapsed_ms;
};

struct ResultEnvelope {
  std::string command;
  std::map<std::string, std::string> params;
  nlohmann::json values = nlohmann::json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  Meta meta;
  int exit_code = kSuccess;
  std::string message;
};

void to_json(nlohmann::json& j, const ResultEnvelope& e);
void from_json(const nlohmann::json& j, ResultEnvelope& e);

/// Validates job.params against the command's schema, then computes.
/// Throws UsageError on invalid parameters. Tolerance failures of `verify`
/// are reported through exit_code = kTolerance.
ResultEnvelope run(const JobSpec& job);

enum class Format { Json, Csv };

/// Serializes deterministically: identical envelopes give identical bytes.
std::string render(const ResultEnvelope& envelope, Format format);

/// Names accepted by `verify --suite`.
std::vector<std::string> verify_suites();

}  // namespace hypcs::jobs
