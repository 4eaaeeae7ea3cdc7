#pragma once

// Flat key = value run configuration. Values may come from a file and from
// command-line overrides; overrides win and every disagreement is logged.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "svmrates/distributions.hpp"

namespace svmrates::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"gen",   "train", "noise", "approx",
                                              "cover", "rates", "check"};
  return names;
}

struct RunConfig {
  std::string command;

  std::string family;
  double gamma = 1.0;
  double q = 1.0;
  double delta = 0.5;
  std::size_t d = 1;

  std::uint64_t seed = 0;
  std::size_t trials = 20;
  std::vector<std::size_t> n_grid;
  std::size_t n = 200;
  double lambda = 0.01;
  double sigma = 4.0;
  bool with_offset = false;
  bool offset_pass = false;

  std::vector<double> sigma_grid;
  std::vector<double> lambda_grid;
  std::vector<double> cover_sigma_grid;
  std::vector<double> epsilon_grid;
  std::vector<double> tsybakov_grid;
  std::vector<double> geometric_grid;
  std::size_t cover_n = 500;
  bool approx_empirical = false;
  std::size_t n_dense = 1000;

  std::optional<double> schedule_q;
  std::optional<double> schedule_alpha;
  std::optional<double> fixed_sigma;

  double tol_opt = 0.0;
  double abs_tol = 1e-8;

  std::size_t jobs = 0;
  std::string out = ".";
  bool plot = false;

  // Every key with its final textual value, defaults included.
  std::map<std::string, std::string> values;
  // Keys present in the file or the overrides (not defaults).
  std::vector<std::string> explicit_keys;
  // One line per override that replaced a different file value.
  std::vector<std::string> conflicts;

  SyntheticDistribution distribution() const;
  // FNV-1a over the command and every value except jobs, out and plot.
  std::string hash() const;
  // "key=value" lines in key order, without jobs, out and plot.
  std::vector<std::string> echo() const;
};

// Reads "key = value" lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);

// Builds a validated config. `overrides` are applied after `file_entries`.
// `env_out` is the default output directory when neither source sets one.
RunConfig make_config(const std::string& command,
                      const std::vector<std::pair<std::string, std::string>>& file_entries,
                      const std::vector<std::pair<std::string, std::string>>& overrides,
                      const std::optional<std::string>& env_out = std::nullopt);

}  // namespace svmrates::cli
