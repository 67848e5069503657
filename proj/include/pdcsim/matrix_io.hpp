#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace pdcsim {

using Metadata = std::vector<std::pair<std::string, std::string>>;

// Plain-text matrix format: `# key = value` header lines followed by rows of
// space-separated decimals at 17 significant digits (lossless round trip).
struct MatrixFile {
  Metadata metadata;
  Eigen::MatrixXd values;

  std::string metadata_value(const std::string& key) const;  // "" if absent
};

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                  const Metadata& metadata);

MatrixFile read_matrix(const std::filesystem::path& path);

// Complex matrices are stored as paired <stem>_real.txt / <stem>_imag.txt.
void write_complex_matrix(const std::filesystem::path& stem, const Eigen::MatrixXcd& values,
                          const Metadata& metadata);

Eigen::MatrixXcd read_complex_matrix(const std::filesystem::path& stem);

std::string format_double(double v);  // %.17g

}  // namespace pdcsim
