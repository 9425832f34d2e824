#pragma once

#include <filesystem>
#include <iosfwd>

#include "cosep/matrix.hpp"

namespace cosep {

// Reads "%%MatrixMarket matrix coordinate|array real|integer general".
// Coordinate entries are accumulated (duplicates add) into a dense matrix.
// Throws ParseError carrying the 1-based line number of the offending line.
Matrix read_matrix_market(std::istream& in);
Matrix read_matrix_market(const std::filesystem::path& path);

// Writes array format, column-major, 17 significant digits.
void write_matrix_market(std::ostream& out, const Matrix& M);
void write_matrix_market(const std::filesystem::path& path, const Matrix& M);

} // namespace cosep
