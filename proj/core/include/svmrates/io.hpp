#pragma once

// Plain-text formats. Numbers use the shortest round-trip decimal form and
// never depend on the locale.
//
// Training set:
//   # d=<d> n=<n> seed=<seed> <description>
//   x_1 ... x_d label            (one line per sample)
//
// Kernel expansion:
//   # sigma=<s> d=<d> n_centers=<m> offset=<b>
//   x_1 ... x_d coefficient      (one line per center)
//
// A solution is an expansion followed by
//   # objective=<v> certificate=<g> lambda=<l> iterations=<k>

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "svmrates/distributions.hpp"
#include "svmrates/kernel.hpp"
#include "svmrates/svm.hpp"

namespace svmrates::io {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_training_set(std::ostream& out, const TrainingSet& set);
TrainingSet read_training_set(std::istream& in);

// `tag` is appended to the header line (extra key=value tokens).
void write_expansion(std::ostream& out, const KernelExpansion& f, std::string_view tag = {});
KernelExpansion read_expansion(std::istream& in);

struct SolutionFooter {
  double objective = 0.0;
  double certificate = 0.0;
  double lambda = 0.0;
  std::size_t iterations = 0;
};

void write_solution(std::ostream& out, const SvmSolution& solution, std::string_view tag = {});
std::pair<KernelExpansion, SolutionFooter> read_solution(std::istream& in);

// "key=value" tokens of a '#' header line; other tokens are ignored.
std::map<std::string, std::string> parse_header(std::string_view line);

// Comma-separated table: one '#' header line, a column line, then rows.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::string_view header, const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

}  // namespace svmrates::io
