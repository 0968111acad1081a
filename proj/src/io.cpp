#include "envmm/io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>
#include <vector>

#include "envmm/errors.hpp"

namespace envmm::io {

namespace {

constexpr int kDigits = 17;

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& cell, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(trim(cell), &used);
    if (used != trim(cell).size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("line " + std::to_string(line_no) + ": cannot parse number '" + cell + "'");
  }
}

int parse_int(const std::string& cell, int line_no) {
  const double v = parse_double(cell, line_no);
  if (v != static_cast<int>(v) || v < 0) {
    throw InvalidInput("line " + std::to_string(line_no) + ": expected a nonnegative integer, got '" + cell + "'");
  }
  return static_cast<int>(v);
}

void expect_header(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != header) {
    throw InvalidInput("expected header '" + header + "', got '" + trim(line) + "'");
  }
}

// Parses `# <tag> a=<x> b=<y>` and returns the two integers.
std::pair<int, int> parse_tag(std::istream& in, const std::string& tag, const std::string& a,
                              const std::string& b) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("missing '# " + tag + "' header");
  std::istringstream ss(line);
  std::string hash, name, first, second;
  ss >> hash >> name >> first >> second;
  const auto value = [&](const std::string& tok, const std::string& key) {
    if (tok.rfind(key + "=", 0) != 0) throw InvalidInput("header '" + trim(line) + "' lacks " + key);
    return parse_int(tok.substr(key.size() + 1), 1);
  };
  if (hash != "#" || name != tag) throw InvalidInput("expected '# " + tag + "' header, got '" + trim(line) + "'");
  return {value(first, a), value(second, b)};
}

void write_rows(std::ostream& out, const Matrix& m) {
  out << std::setprecision(kDigits);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << m(r, c);
    out << '\n';
  }
}

Matrix read_rows(std::istream& in, int rows, int cols) {
  Matrix m(rows, cols);
  std::string line;
  int line_no = 1;
  for (int r = 0; r < rows; ++r) {
    ++line_no;
    if (!std::getline(in, line)) throw InvalidInput("expected " + std::to_string(rows) + " data rows");
    const auto cells = split(line);
    if (static_cast<int>(cells.size()) != cols) {
      throw InvalidInput("line " + std::to_string(line_no) + ": expected " + std::to_string(cols) + " values");
    }
    for (int c = 0; c < cols; ++c) m(r, c) = parse_double(cells[c], line_no);
  }
  return m;
}

template <typename Fn>
auto with_file(const std::string& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return fn(in);
  } catch (const Error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

}  // namespace

void write_ensemble_csv(std::ostream& out, const SourceEnsemble& e) {
  out << "atom,weight,component,coeff_index,value\n" << std::setprecision(kDigits);
  for (int j = 0; j < e.atom_count(); ++j) {
    for (int i = 0; i < e.d(); ++i) {
      for (int k = 0; k < e.p(); ++k) {
        out << j << ',' << e.space().weight(j) << ',' << i << ',' << k << ',' << e.coefficient(j, i, k) << '\n';
      }
    }
  }
}

SourceEnsemble read_ensemble_csv(std::istream& in) {
  expect_header(in, "atom,weight,component,coeff_index,value");
  std::map<std::tuple<int, int, int>, double> cells;
  std::map<int, double> weights;
  int d = 0, p = 0, line_no = 1;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto c = split(line);
    if (c.size() != 5) throw InvalidInput("line " + std::to_string(line_no) + ": expected 5 columns");
    const int atom = parse_int(c[0], line_no);
    const double w = parse_double(c[1], line_no);
    const int comp = parse_int(c[2], line_no);
    const int coeff = parse_int(c[3], line_no);
    const auto [it, fresh] = weights.emplace(atom, w);
    if (!fresh && it->second != w) {
      throw InvalidInput("line " + std::to_string(line_no) + ": inconsistent weight for atom " + std::to_string(atom));
    }
    if (!cells.emplace(std::tuple{atom, comp, coeff}, parse_double(c[4], line_no)).second) {
      throw InvalidInput("line " + std::to_string(line_no) + ": duplicate cell");
    }
    d = std::max(d, comp + 1);
    p = std::max(p, coeff + 1);
  }
  const int m = static_cast<int>(weights.size());
  if (m == 0) throw InvalidInput("ensemble CSV has no rows");
  if (weights.rbegin()->first != m - 1) throw InvalidInput("atom indices must be 0..m-1");
  if (static_cast<long long>(cells.size()) != static_cast<long long>(m) * d * p) {
    throw InvalidInput("ensemble CSV is missing cells");
  }
  std::vector<double> w;
  for (const auto& [atom, value] : weights) w.push_back(value);
  Matrix values(m, d * p);
  for (const auto& [key, value] : cells) {
    const auto [atom, comp, coeff] = key;
    values(atom, vec_index(comp, coeff, p)) = value;
  }
  return SourceEnsemble(MeasureSpace(std::move(w)), d, p, std::move(values));
}

void write_blockcov_csv(std::ostream& out, const BlockCovariance& s) {
  out << "# blockcov d=" << s.d() << " p=" << s.p() << '\n';
  write_rows(out, s.matrix());
}

BlockCovariance read_blockcov_csv(std::istream& in) {
  const auto [d, p] = parse_tag(in, "blockcov", "d", "p");
  return BlockCovariance(d, p, read_rows(in, d * p, d * p));
}

void write_hsop_csv(std::ostream& out, const HSOperator& t) {
  out << "# hsop p_out=" << t.p_out() << " q=" << t.q() << '\n';
  write_rows(out, t.lambda());
}

HSOperator read_hsop_csv(std::istream& in) {
  const auto [rows, cols] = parse_tag(in, "hsop", "p_out", "q");
  return HSOperator(read_rows(in, rows, cols));
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  out << "# matrix rows=" << m.rows() << " cols=" << m.cols() << '\n';
  write_rows(out, m);
}

Matrix read_matrix_csv(std::istream& in) {
  const auto [rows, cols] = parse_tag(in, "matrix", "rows", "cols");
  return read_rows(in, rows, cols);
}

void write_sequence_csv(std::ostream& out, const CovarianceSequence& seq) {
  out << "lag,i,j,value\n" << std::setprecision(kDigits);
  for (int tau = 0; tau <= seq.max_lag(); ++tau) {
    const Matrix k = seq.at(tau);
    for (int i = 0; i < seq.d(); ++i) {
      for (int j = 0; j < seq.d(); ++j) out << tau << ',' << i << ',' << j << ',' << k(i, j) << '\n';
    }
  }
}

CovarianceSequence read_sequence_csv(std::istream& in) {
  expect_header(in, "lag,i,j,value");
  std::map<std::tuple<int, int, int>, double> cells;
  int L = -1, d = 0, line_no = 1;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto c = split(line);
    if (c.size() != 4) throw InvalidInput("line " + std::to_string(line_no) + ": expected 4 columns");
    const int tau = parse_int(c[0], line_no), i = parse_int(c[1], line_no), j = parse_int(c[2], line_no);
    if (!cells.emplace(std::tuple{tau, i, j}, parse_double(c[3], line_no)).second) {
      throw InvalidInput("line " + std::to_string(line_no) + ": duplicate cell");
    }
    L = std::max(L, tau);
    d = std::max({d, i + 1, j + 1});
  }
  if (L < 0) throw InvalidInput("covariance sequence CSV has no rows");
  std::vector<Matrix> lags(L + 1, Matrix::Zero(d, d));
  for (const auto& [key, value] : cells) {
    const auto [tau, i, j] = key;
    lags[tau](i, j) = value;
  }
  return CovarianceSequence(d, std::move(lags));
}

void write_spectral_csv(std::ostream& out, const SpectralDensity& s) {
  out << "freq_index,i,j,re,im\n" << std::setprecision(kDigits);
  for (int r = 0; r < s.grid_size(); ++r) {
    for (int i = 0; i < s.d; ++i) {
      for (int j = 0; j < s.d; ++j) {
        out << r << ',' << i << ',' << j << ',' << s.values[r](i, j).real() << ',' << s.values[r](i, j).imag() << '\n';
      }
    }
  }
}

void write_complex_series_csv(std::ostream& out, const ComplexVector& v) {
  out << "freq_index,re,im\n" << std::setprecision(kDigits);
  for (Eigen::Index r = 0; r < v.size(); ++r) out << r << ',' << v(r).real() << ',' << v(r).imag() << '\n';
}

SourceEnsemble load_ensemble(const std::string& path) {
  return with_file(path, [](std::istream& in) { return read_ensemble_csv(in); });
}

CovarianceSequence load_sequence(const std::string& path) {
  return with_file(path, [](std::istream& in) { return read_sequence_csv(in); });
}

Matrix load_matrix(const std::string& path) {
  return with_file(path, [](std::istream& in) { return read_matrix_csv(in); });
}

}  // namespace envmm::io
