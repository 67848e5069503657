#include "pdcsim/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pdcsim/errors.hpp"

namespace pdcsim {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string MatrixFile::metadata_value(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  return "";
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                  const Metadata& metadata) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open " + path.string() + " for writing");
  out << "# rows = " << values.rows() << "\n";
  out << "# cols = " << values.cols() << "\n";
  for (const auto& [k, v] : metadata) out << "# " << k << " = " << v << "\n";
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c) out << ' ';
      out << format_double(values(r, c));
    }
    out << '\n';
  }
  if (!out) throw config_error("write to " + path.string() + " failed");
}

MatrixFile read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open " + path.string());

  MatrixFile file;
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        auto trim = [](std::string s) {
          const auto b = s.find_first_not_of(" \t#");
          const auto e = s.find_last_not_of(" \t\r");
          return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        file.metadata.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
      }
      continue;
    }
    std::istringstream row(line);
    std::vector<double> vals;
    double v;
    while (row >> v) vals.push_back(v);
    if (!vals.empty()) rows.push_back(std::move(vals));
  }

  if (rows.empty()) throw config_error(path.string() + ": no matrix data");
  const std::size_t cols = rows.front().size();
  file.values.resize(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols)
      throw config_error(path.string() + ": ragged row " + std::to_string(r));
    for (std::size_t c = 0; c < cols; ++c) file.values(r, c) = rows[r][c];
  }
  return file;
}

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& stem, const std::string& suffix) {
  std::filesystem::path p = stem;
  p += suffix;
  return p;
}

}  // namespace

void write_complex_matrix(const std::filesystem::path& stem, const Eigen::MatrixXcd& values,
                          const Metadata& metadata) {
  write_matrix(with_suffix(stem, "_real.txt"), values.real(), metadata);
  write_matrix(with_suffix(stem, "_imag.txt"), values.imag(), metadata);
}

Eigen::MatrixXcd read_complex_matrix(const std::filesystem::path& stem) {
  const MatrixFile re = read_matrix(with_suffix(stem, "_real.txt"));
  const MatrixFile im = read_matrix(with_suffix(stem, "_imag.txt"));
  if (re.values.rows() != im.values.rows() || re.values.cols() != im.values.cols())
    throw config_error(stem.string() + ": real/imag dimensions differ");
  Eigen::MatrixXcd m(re.values.rows(), re.values.cols());
  m.real() = re.values;
  m.imag() = im.values;
  return m;
}

}  // namespace pdcsim
