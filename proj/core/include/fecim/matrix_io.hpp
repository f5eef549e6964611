#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace fecim {

/// Row-major integer matrix with the declared bit precision of its entries.
struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  int precision = 8;
  std::vector<int> values;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c, int prec = 8) : rows(r), cols(c), precision(prec), values(r * c, 0) {}

  int& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  int at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::vector<int> column(std::size_t c) const;
  std::vector<int> row(std::size_t r) const;

  bool operator==(const IntMatrix&) const = default;
};

// CSV: first line "rows,cols,precision", then one line of comma-separated
// integers per row.
//
// Binary (little-endian):
//   offset 0   4 bytes  magic "FECM"
//   offset 4   u32      format version (1)
//   offset 8   u32      rows
//   offset 12  u32      cols
//   offset 16  u32      precision
//   offset 20  i32[rows*cols] row-major values
IntMatrix read_matrix_csv(std::istream& is);
IntMatrix read_matrix_binary(std::istream& is);
/// Dispatches on the leading magic bytes.
IntMatrix read_matrix(const std::filesystem::path& path);

void write_matrix_csv(std::ostream& os, const IntMatrix& m);
void write_matrix_binary(std::ostream& os, const IntMatrix& m);

}  // namespace fecim
