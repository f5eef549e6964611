#include "fecim/matrix_io.hpp"

#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "fecim/errors.hpp"

namespace fecim {
namespace {

constexpr std::array<char, 4> kMagic{'F', 'E', 'C', 'M'};

std::vector<long> parse_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<long> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stol(field, &used));
      while (used < field.size() && (field[used] == ' ' || field[used] == '\r')) ++used;
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw ConfigError("matrix line " + std::to_string(line_no) + ": bad integer '" + field + "'");
    }
  }
  return out;
}

std::uint32_t read_u32(std::istream& is) {
  std::array<unsigned char, 4> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), 4)) throw ConfigError("truncated binary matrix");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_u32(std::ostream& os, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                              static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  os.write(b.data(), 4);
}

}  // namespace

std::vector<int> IntMatrix::column(std::size_t c) const {
  std::vector<int> out(rows);
  for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, c);
  return out;
}

std::vector<int> IntMatrix::row(std::size_t r) const {
  return {values.begin() + static_cast<std::ptrdiff_t>(r * cols),
          values.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols)};
}

IntMatrix read_matrix_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("matrix file is empty");
  const auto header = parse_csv_line(line, 1);
  if (header.size() != 3 || header[0] < 0 || header[1] < 0 || header[2] < 1 || header[2] > 16) {
    throw ConfigError("matrix line 1: header must be 'rows,cols,precision'");
  }
  IntMatrix m(static_cast<std::size_t>(header[0]), static_cast<std::size_t>(header[1]), static_cast<int>(header[2]));
  for (std::size_t r = 0; r < m.rows; ++r) {
    if (!std::getline(is, line)) throw ConfigError("matrix has fewer rows than its header declares");
    const auto vals = parse_csv_line(line, r + 2);
    if (vals.size() != m.cols) {
      throw ConfigError("matrix line " + std::to_string(r + 2) + ": expected " + std::to_string(m.cols) + " values");
    }
    for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = static_cast<int>(vals[c]);
  }
  return m;
}

IntMatrix read_matrix_binary(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), 4) || magic != kMagic) throw ConfigError("binary matrix: bad magic");
  if (read_u32(is) != 1) throw ConfigError("binary matrix: unsupported version");
  const std::uint32_t rows = read_u32(is);
  const std::uint32_t cols = read_u32(is);
  const std::uint32_t precision = read_u32(is);
  IntMatrix m(rows, cols, static_cast<int>(precision));
  for (int& v : m.values) v = static_cast<int>(static_cast<std::int32_t>(read_u32(is)));
  return m;
}

IntMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open matrix file " + path.string());
  std::array<char, 4> head{};
  is.read(head.data(), 4);
  const bool binary = is.gcount() == 4 && head == kMagic;
  is.clear();
  is.seekg(0);
  try {
    return binary ? read_matrix_binary(is) : read_matrix_csv(is);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_matrix_csv(std::ostream& os, const IntMatrix& m) {
  os << m.rows << ',' << m.cols << ',' << m.precision << '\n';
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) os << (c ? "," : "") << m.at(r, c);
    os << '\n';
  }
}

void write_matrix_binary(std::ostream& os, const IntMatrix& m) {
  os.write(kMagic.data(), 4);
  write_u32(os, 1);
  write_u32(os, static_cast<std::uint32_t>(m.rows));
  write_u32(os, static_cast<std::uint32_t>(m.cols));
  write_u32(os, static_cast<std::uint32_t>(m.precision));
  for (int v : m.values) write_u32(os, static_cast<std::uint32_t>(v));
}

}  // namespace fecim
