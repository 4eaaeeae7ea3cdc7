#include "svmrates/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "svmrates/format.hpp"

namespace svmrates::io {
namespace {

std::string next_header(std::istream& in, const char* what) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') return line;
    if (!line.empty()) break;
  }
  throw FormatError(std::string(what) + ": missing '#' header line");
}

const std::string& require(const std::map<std::string, std::string>& h, const std::string& key,
                           const char* what) {
  const auto it = h.find(key);
  if (it == h.end()) throw FormatError(std::string(what) + ": header lacks '" + key + "'");
  return it->second;
}

std::size_t parse_count(const std::string& text, const char* what) {
  std::size_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw FormatError(std::string(what) + ": bad count '" + text + "'");
  }
  return v;
}

std::vector<double> parse_row(const std::string& line, std::size_t expected, const char* what) {
  std::istringstream ss(line);
  std::vector<double> v;
  std::string tok;
  while (ss >> tok) {
    try {
      v.push_back(parse_number(tok));
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string(what) + ": " + e.what());
    }
  }
  if (v.size() != expected) {
    throw FormatError(std::string(what) + ": expected " + std::to_string(expected) +
                      " fields, got " + std::to_string(v.size()));
  }
  return v;
}

std::string data_line(std::istream& in, const char* what) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') return line;
  }
  throw FormatError(std::string(what) + ": unexpected end of input");
}

}  // namespace

std::map<std::string, std::string> parse_header(std::string_view line) {
  std::map<std::string, std::string> out;
  if (!line.empty() && line[0] == '#') line.remove_prefix(1);
  std::istringstream ss{std::string(line)};
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) continue;
    out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

void write_training_set(std::ostream& out, const TrainingSet& set) {
  out << "# d=" << set.dim() << " n=" << set.size() << " seed=" << set.seed();
  if (!set.provenance().empty()) out << ' ' << set.provenance();
  out << '\n';
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (double v : set.point(i)) out << format_number(v) << ' ';
    out << set.label(i) << '\n';
  }
}

TrainingSet read_training_set(std::istream& in) {
  const char* what = "training set";
  const std::string header = next_header(in, what);
  const auto h = parse_header(header);
  const std::size_t d = parse_count(require(h, "d", what), what);
  const std::size_t n = parse_count(require(h, "n", what), what);
  const auto seed = static_cast<std::uint64_t>(parse_count(require(h, "seed", what), what));
  if (d == 0 || n == 0) throw FormatError("training set: d and n must be positive");
  // Provenance is everything after the seed token.
  std::string provenance;
  if (const auto pos = header.find("seed="); pos != std::string::npos) {
    const auto space = header.find(' ', pos);
    if (space != std::string::npos) provenance = header.substr(space + 1);
  }
  PointMatrix points(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = parse_row(data_line(in, what), d + 1, what);
    for (std::size_t k = 0; k < d; ++k) {
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v[k];
    }
    if (v[d] != 1.0 && v[d] != -1.0) throw FormatError("training set: label must be +1 or -1");
    labels[i] = static_cast<int>(v[d]);
  }
  return TrainingSet(std::move(points), std::move(labels), seed, provenance);
}

void write_expansion(std::ostream& out, const KernelExpansion& f, std::string_view tag) {
  out << "# sigma=" << format_number(f.kernel().sigma()) << " d=" << f.dim()
      << " n_centers=" << f.size() << " offset=" << format_number(f.offset());
  if (!tag.empty()) out << ' ' << tag;
  out << '\n';
  for (Eigen::Index i = 0; i < f.centers().rows(); ++i) {
    for (Eigen::Index k = 0; k < f.centers().cols(); ++k) {
      out << format_number(f.centers()(i, k)) << ' ';
    }
    out << format_number(f.coefficients()[i]) << '\n';
  }
}

KernelExpansion read_expansion(std::istream& in) {
  const char* what = "kernel expansion";
  const auto h = parse_header(next_header(in, what));
  const double sigma = parse_number(require(h, "sigma", what));
  const std::size_t d = parse_count(require(h, "d", what), what);
  const std::size_t m = parse_count(require(h, "n_centers", what), what);
  const double offset = parse_number(require(h, "offset", what));
  PointMatrix centers(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
  Eigen::VectorXd c(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const auto v = parse_row(data_line(in, what), d + 1, what);
    for (std::size_t k = 0; k < d; ++k) {
      centers(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v[k];
    }
    c[static_cast<Eigen::Index>(i)] = v[d];
  }
  return KernelExpansion(GaussianKernel(sigma), std::move(centers), std::move(c), offset);
}

void write_solution(std::ostream& out, const SvmSolution& s, std::string_view tag) {
  write_expansion(out, s.expansion, tag);
  out << "# objective=" << format_number(s.objective)
      << " certificate=" << format_number(s.certificate)
      << " lambda=" << format_number(s.lambda) << " iterations=" << s.iterations << '\n';
}

std::pair<KernelExpansion, SolutionFooter> read_solution(std::istream& in) {
  const char* what = "solution";
  KernelExpansion f = read_expansion(in);
  const auto h = parse_header(next_header(in, what));
  SolutionFooter footer;
  footer.objective = parse_number(require(h, "objective", what));
  footer.certificate = parse_number(require(h, "certificate", what));
  footer.lambda = parse_number(require(h, "lambda", what));
  footer.iterations = parse_count(require(h, "iterations", what), what);
  return {std::move(f), footer};
}

CsvWriter::CsvWriter(std::ostream& out, std::string_view header,
                     const std::vector<std::string>& columns)
    : out_(out), columns_(columns.size()) {
  out_ << "# " << header << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::invalid_argument("CsvWriter: wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
}

}  // namespace svmrates::io
