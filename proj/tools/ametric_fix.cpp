// ametric-fix <axioms|classify|solve|verify> --config <path> [--out-dir <path>] [--seed <u64>]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ametric/cli/commands.hpp"

int main(int argc, char** argv) {
  namespace cli = ametric::cli;

  CLI::App app{"A-metric spaces, A-Zamfirescu certificates and Picard iteration", "ametric-fix"};
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  app.add_option("command", command, "axioms | classify | solve | verify")
      ->required()
      ->check(CLI::IsMember({"axioms", "classify", "solve", "verify"}));
  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--out-dir", out_dir, "directory for reports");
  app.add_option("--seed", seed, "override sampling.seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitUsage;
  }

  cli::configure_logging();
  const auto result =
      cli::run_from_file(cli::command_from_string(command), config_path, out_dir, seed);
  for (const auto& path : result.outputs) std::cout << path.string() << "\n";
  return result.exit_code;
}
