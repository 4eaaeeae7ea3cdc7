#include "svmrates_cli/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "svmrates/format.hpp"

namespace svmrates::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Default textual value per key. An empty default means "unset".
const std::map<std::string, std::string>& defaults() {
  static const std::map<std::string, std::string> table{
      {"family", ""},
      {"gamma", "1"},
      {"q", "1"},
      {"delta", "0.5"},
      {"d", "1"},
      {"seed", ""},
      {"trials", "20"},
      {"n_grid", "32,64,128,256,512,1024,2048"},
      {"n", "200"},
      {"lambda", "0.01"},
      {"sigma", "4"},
      {"with_offset", "false"},
      {"offset_pass", "false"},
      {"sigma_grid", "2,4,8,16,32"},
      {"lambda_grid", "1e-05,0.0001,0.001,0.01,0.1"},
      {"cover_sigma_grid", "1,2,4,8,16,32"},
      {"epsilon_grid",
       "0.00390625,0.0078125,0.015625,0.03125,0.0625,0.125,0.25,0.5"},
      {"tsybakov_grid", "0.001,0.002,0.005,0.01,0.02,0.05,0.1,0.2,0.5"},
      {"geometric_grid", "0.0001,0.0002,0.0005,0.001,0.002,0.005,0.01"},
      {"cover_n", "500"},
      {"approx_empirical", "false"},
      {"n_dense", "1000"},
      {"schedule_q", ""},
      {"schedule_alpha", ""},
      {"fixed_sigma", ""},
      {"tol_opt", "0"},
      {"abs_tol", "1e-08"},
      {"jobs", "0"},
      {"out", "."},
      {"plot", "false"},
  };
  return table;
}

const std::set<std::string>& unhashed() {
  static const std::set<std::string> keys{"jobs", "out", "plot"};
  return keys;
}

[[noreturn]] void malformed(const std::string& key, const std::string& value,
                            const std::string& why) {
  throw ConfigError("malformed value for '" + key + "': '" + value + "' (" + why + ")");
}

double to_double(const std::string& key, const std::string& v) {
  try {
    return parse_number(v);
  } catch (const std::invalid_argument&) {
    malformed(key, v, "expected a number");
  }
}

double positive(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (!(x > 0.0)) malformed(key, v, "must be positive");
  return x;
}

std::size_t to_count(const std::string& key, const std::string& v, std::size_t min) {
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    if (v.empty() || v[0] == '-' || v[0] == '+') throw std::invalid_argument("sign");
    x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    malformed(key, v, "expected a nonnegative integer");
  }
  if (pos != v.size()) malformed(key, v, "expected a nonnegative integer");
  if (x < min) malformed(key, v, "must be at least " + std::to_string(min));
  return static_cast<std::size_t>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  malformed(key, v, "expected true or false");
}

std::vector<std::string> split(const std::string& v) {
  std::vector<std::string> parts;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

std::vector<double> to_grid(const std::string& key, const std::string& v) {
  std::vector<double> g;
  for (const auto& p : split(v)) g.push_back(positive(key, p));
  if (g.empty()) malformed(key, v, "grid is empty");
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(g[i] > g[i - 1])) malformed(key, v, "grid must be strictly increasing");
  }
  return g;
}

std::vector<std::size_t> to_count_grid(const std::string& key, const std::string& v) {
  std::vector<std::size_t> g;
  for (const auto& p : split(v)) g.push_back(to_count(key, p, 2));
  if (g.empty()) malformed(key, v, "grid is empty");
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (g[i] <= g[i - 1]) malformed(key, v, "grid must be strictly increasing");
  }
  return g;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

RunConfig make_config(const std::string& command,
                      const std::vector<std::pair<std::string, std::string>>& file_entries,
                      const std::vector<std::pair<std::string, std::string>>& overrides,
                      const std::optional<std::string>& env_out) {
  const auto& names = subcommands();
  if (std::find(names.begin(), names.end(), command) == names.end()) {
    throw ConfigError("unknown subcommand '" + command + "'");
  }
  RunConfig c;
  c.command = command;
  c.values = defaults();
  if (env_out && !env_out->empty()) c.values["out"] = *env_out;

  std::map<std::string, std::string> from_file;
  for (const auto& [key, value] : file_entries) {
    if (!defaults().count(key)) throw ConfigError("unknown key '" + key + "'");
    if (from_file.count(key) && from_file[key] != value) {
      throw ConfigError("key '" + key + "' set twice in the config file");
    }
    from_file[key] = value;
  }
  std::map<std::string, std::string> from_flags;
  for (const auto& [key, value] : overrides) {
    if (!defaults().count(key)) throw ConfigError("unknown key '" + key + "'");
    from_flags[key] = value;
  }
  for (const auto& [key, value] : from_file) c.values[key] = value;
  for (const auto& [key, value] : from_flags) {
    if (auto it = from_file.find(key); it != from_file.end() && it->second != value) {
      c.conflicts.push_back("flag overrides config file for '" + key + "': " + value +
                            " replaces " + it->second);
    }
    c.values[key] = value;
  }
  for (const auto& [key, value] : c.values) {
    if (from_file.count(key) || from_flags.count(key)) c.explicit_keys.push_back(key);
  }

  const auto& v = c.values;
  if (v.at("seed").empty()) throw ConfigError("missing required key 'seed'");
  c.seed = to_count("seed", v.at("seed"), 0);
  c.family = v.at("family");
  if (c.family.empty() && command != "check") {
    throw ConfigError("missing required key 'family'");
  }
  if (!c.family.empty() && c.family != "power_margin" && c.family != "weighted_power_margin" &&
      c.family != "separated") {
    malformed("family", c.family, "expected power_margin, weighted_power_margin or separated");
  }
  c.gamma = positive("gamma", v.at("gamma"));
  c.q = positive("q", v.at("q"));
  c.delta = positive("delta", v.at("delta"));
  c.d = to_count("d", v.at("d"), 1);
  c.trials = to_count("trials", v.at("trials"), 1);
  c.n_grid = to_count_grid("n_grid", v.at("n_grid"));
  c.n = to_count("n", v.at("n"), 1);
  c.lambda = positive("lambda", v.at("lambda"));
  c.sigma = positive("sigma", v.at("sigma"));
  c.with_offset = to_bool("with_offset", v.at("with_offset"));
  c.offset_pass = to_bool("offset_pass", v.at("offset_pass"));
  c.sigma_grid = to_grid("sigma_grid", v.at("sigma_grid"));
  c.lambda_grid = to_grid("lambda_grid", v.at("lambda_grid"));
  c.cover_sigma_grid = to_grid("cover_sigma_grid", v.at("cover_sigma_grid"));
  c.epsilon_grid = to_grid("epsilon_grid", v.at("epsilon_grid"));
  c.tsybakov_grid = to_grid("tsybakov_grid", v.at("tsybakov_grid"));
  c.geometric_grid = to_grid("geometric_grid", v.at("geometric_grid"));
  c.cover_n = to_count("cover_n", v.at("cover_n"), 2);
  c.approx_empirical = to_bool("approx_empirical", v.at("approx_empirical"));
  c.n_dense = to_count("n_dense", v.at("n_dense"), 2);
  if (!v.at("schedule_q").empty()) {
    c.schedule_q = to_double("schedule_q", v.at("schedule_q"));
    if (!(*c.schedule_q >= 0.0)) malformed("schedule_q", v.at("schedule_q"), "must be >= 0");
  }
  if (!v.at("schedule_alpha").empty()) {
    c.schedule_alpha = positive("schedule_alpha", v.at("schedule_alpha"));
  }
  if (!v.at("fixed_sigma").empty()) c.fixed_sigma = positive("fixed_sigma", v.at("fixed_sigma"));
  c.tol_opt = to_double("tol_opt", v.at("tol_opt"));
  if (c.tol_opt < 0.0) malformed("tol_opt", v.at("tol_opt"), "must be positive, or 0 for 1e-8*n");
  c.abs_tol = positive("abs_tol", v.at("abs_tol"));
  c.jobs = to_count("jobs", v.at("jobs"), 0);
  c.out = v.at("out");
  if (c.out.empty()) malformed("out", c.out, "empty path");
  c.plot = to_bool("plot", v.at("plot"));

  for (auto x : c.epsilon_grid) {
    if (x > 1.0) malformed("epsilon_grid", v.at("epsilon_grid"), "radii must lie in (0, 1]");
  }
  for (const auto* key : {"tsybakov_grid", "geometric_grid"}) {
    const auto& g = std::string(key) == "tsybakov_grid" ? c.tsybakov_grid : c.geometric_grid;
    if (g.back() >= 1.0) malformed(key, v.at(key), "values must lie in (0, 1)");
  }
  if (c.family == "separated" && c.d > 4) malformed("d", v.at("d"), "at most 4");
  if (c.family != "separated" && !c.family.empty() && c.d != 1) {
    malformed("d", v.at("d"), c.family + " is one-dimensional");
  }
  return c;
}

SyntheticDistribution RunConfig::distribution() const {
  if (family == "power_margin") return SyntheticDistribution::power_margin(gamma);
  if (family == "weighted_power_margin") {
    return SyntheticDistribution::weighted_power_margin(gamma, q);
  }
  if (family == "separated") return SyntheticDistribution::separated(delta, d);
  throw ConfigError("no family configured");
}

std::string RunConfig::hash() const {
  std::string text = "command=" + command + "\n";
  for (const auto& [key, value] : values) {
    if (!unhashed().count(key)) text += key + "=" + value + "\n";
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
  return buf;
}

std::vector<std::string> RunConfig::echo() const {
  std::vector<std::string> lines;
  for (const auto& [key, value] : values) {
    if (!unhashed().count(key)) lines.push_back(key + "=" + value);
  }
  return lines;
}

}  // namespace svmrates::cli
