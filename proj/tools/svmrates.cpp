#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "svmrates_cli/commands.hpp"
#include "svmrates_cli/config.hpp"

int main(int argc, char** argv) {
  namespace cli = svmrates::cli;
  CLI::App app{"Gaussian-kernel hinge SVM experiments"};
  std::string command;
  std::string config_path;
  std::optional<std::string> seed, jobs, out;
  bool plot = false;
  std::vector<std::string> sets;
  app.add_option("command", command, "gen, train, noise, approx, cover, rates or check")
      ->required()
      ->check(CLI::IsMember(cli::subcommands()));
  app.add_option("--config", config_path, "key = value configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "base seed");
  app.add_option("--jobs", jobs, "worker threads (0 = all cores)");
  app.add_option("--out", out, "output directory (default $SVMRATES_OUT or .)");
  app.add_flag("--plot", plot, "also write SVG plots");
  app.add_option("--set", sets, "override any key: --set key=value")->take_all();
  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<std::pair<std::string, std::string>> file_entries;
    if (!config_path.empty()) file_entries = cli::read_config_file(config_path);
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw cli::ConfigError("--set expects key=value, got '" + s + "'");
      overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (seed) overrides.emplace_back("seed", *seed);
    if (jobs) overrides.emplace_back("jobs", *jobs);
    if (out) overrides.emplace_back("out", *out);
    if (plot) overrides.emplace_back("plot", "true");
    std::optional<std::string> env_out;
    if (const char* e = std::getenv("SVMRATES_OUT")) env_out = e;
    const cli::RunConfig config = cli::make_config(command, file_entries, overrides, env_out);
    return cli::run(config, std::cerr).exit_code;
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
