#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ethlab/error.hpp"
#include "ethlab/hamiltonian.hpp"

namespace ethlab {
namespace {

static_assert(std::endian::native == std::endian::little,
              "matrix dumps assume a little-endian host");

constexpr std::array<char, 8> kMagic = {'E', 'T', 'H', 'L', 'A', 'B', 'M', '1'};

template <class T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw Error("truncated matrix dump");
  return value;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> split_doubles(const std::string& line) {
  std::vector<double> values;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    values.push_back(std::strtod(cell.c_str(), &end));
    if (end == cell.c_str()) throw Error("malformed number '" + cell + "' in matrix CSV");
  }
  return values;
}

}  // namespace

void write_matrix_binary(const std::filesystem::path& path, const OperatorMatrix& m) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os.write(kMagic.data(), kMagic.size());
  put<std::int64_t>(os, static_cast<std::int64_t>(m.dim()));
  put<std::int32_t>(os, m.tag.sites);
  put<std::int32_t>(os, m.tag.particles);
  put<std::int32_t>(os, m.tag.momentum);
  const auto n = m.entries.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      put<double>(os, m.entries(i, j).real());
      put<double>(os, m.entries(i, j).imag());
    }
  }
  if (!os) throw Error("write failed for " + path.string());
}

OperatorMatrix read_matrix_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw Error(path.string() + " is not an ethlab matrix dump");
  const auto dim = get<std::int64_t>(is);
  if (dim < 0) throw Error("negative dimension in " + path.string());
  OperatorMatrix m;
  m.tag.sites = get<std::int32_t>(is);
  m.tag.particles = get<std::int32_t>(is);
  m.tag.momentum = get<std::int32_t>(is);
  m.entries.resize(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      m.entries(i, j) = cplx(re, im);
    }
  }
  return m;
}

void write_matrix_csv(const std::filesystem::path& path, const OperatorMatrix& m) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << "dim,L,N,k\n"
     << m.dim() << ',' << m.tag.sites << ',' << m.tag.particles << ',' << m.tag.momentum
     << '\n';
  const auto n = m.entries.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j > 0) os << ',';
      os << format_double(m.entries(i, j).real()) << ','
         << format_double(m.entries(i, j).imag());
    }
    os << '\n';
  }
  if (!os) throw Error("write failed for " + path.string());
}

OperatorMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  std::string line;
  std::getline(is, line);
  if (line != "dim,L,N,k") throw Error(path.string() + ": missing 'dim,L,N,k' header");
  std::getline(is, line);
  const auto header = split_doubles(line);
  if (header.size() != 4) throw Error(path.string() + ": malformed dimension line");
  const auto dim = static_cast<Eigen::Index>(header[0]);
  OperatorMatrix m;
  m.tag = {static_cast<int>(header[1]), static_cast<int>(header[2]),
           static_cast<int>(header[3])};
  m.entries.resize(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (!std::getline(is, line)) throw Error(path.string() + ": missing matrix rows");
    const auto row = split_doubles(line);
    if (static_cast<Eigen::Index>(row.size()) != 2 * dim) {
      throw Error(path.string() + ": row " + std::to_string(i) + " has wrong length");
    }
    for (Eigen::Index j = 0; j < dim; ++j) {
      m.entries(i, j) = cplx(row[static_cast<std::size_t>(2 * j)],
                             row[static_cast<std::size_t>(2 * j + 1)]);
    }
  }
  return m;
}

}  // namespace ethlab
