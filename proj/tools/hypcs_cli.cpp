// Command-line front end: one subcommand per job type, all parameters as flags.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "hypcs/jobs.hpp"

namespace {

using hypcs::jobs::Command;

struct Flag {
  const char* names;
  const char* key;
  const char* help;
};

const Flag kFlags[] = {
    {"--sigma", "sigma", "weight parameter, sigma > 1"},
    {"--m", "m", "Landau level, sigma - 2m - 1 > 0"},
    {"--alpha", "alpha", "isotonic oscillator parameter, alpha >= 1/2"},
    {"--t,--beta", "t", "heat time / inverse temperature"},
    {"--epsilon", "epsilon", "fugacity e^{beta eta}"},
    {"--z", "z", "disk point 're,im' or 'r@theta'"},
    {"--w", "w", "second disk point"},
    {"--grid-r", "grid-r", "number of radii r = i/n, i < n"},
    {"--r", "r", "single radius"},
    {"--kmax", "kmax", "largest index"},
    {"--nodes", "nodes", "radial quadrature nodes"},
    {"--suite", "suite", "verification suite"},
    {"--tol", "tol", "tolerance"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized negative binomial states on the unit disk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HYPCS_VERSION);

  std::map<std::string, std::string> values;
  std::string out_path;
  std::string format = "json";
  bool timing = false;

  const std::map<std::string, Command> commands = {
      {"basis", Command::Basis},         {"overlap", Command::Overlap},
      {"photon", Command::Photon},       {"qfunction", Command::QFunction},
      {"bound", Command::Bound},         {"verify", Command::Verify},
  };
  std::map<CLI::App*, Command> by_app;
  for (const auto& [name, command] : commands) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " job");
    for (const Flag& f : kFlags) sub->add_option(f.names, values[f.key], f.help);
    sub->add_option("--out", out_path, "write the result to this file");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--timing", timing, "record elapsed_ms in meta");
    by_app[sub] = command;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hypcs::jobs::kUsage;
  }

  hypcs::jobs::JobSpec job;
  for (const auto& [sub, command] : by_app) {
    if (!sub->parsed()) continue;
    job.command = command;
    for (const Flag& f : kFlags) {
      const std::string first = std::string(f.names).substr(0, std::string(f.names).find(','));
      if (sub->count(first) > 0) job.params[f.key] = values[f.key];
    }
  }
  if (timing) job.params["timing"] = "1";

  hypcs::jobs::ResultEnvelope envelope;
  try {
    envelope = hypcs::jobs::run(job);
  } catch (const hypcs::jobs::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return hypcs::jobs::kUsage;
  }

  const std::string text = hypcs::jobs::render(
      envelope, format == "csv" ? hypcs::jobs::Format::Csv : hypcs::jobs::Format::Json);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "cannot open " << out_path << " for writing\n";
      return hypcs::jobs::kUsage;
    }
    file << text;
  }
  if (envelope.exit_code != hypcs::jobs::kSuccess) std::cerr << envelope.message << "\n";
  return envelope.exit_code;
}
