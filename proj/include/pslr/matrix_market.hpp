#pragma once

#include <filesystem>
#include <iosfwd>

#include "pslr/sparse.hpp"

namespace pslr {

/// Reads `%%MatrixMarket matrix coordinate real {general|symmetric}`.
/// Symmetric storage is expanded, duplicate entries are summed and indices
/// become 0-based. Throws ParseError with the offending line number.
SparseMatrix read_matrix_market(const std::filesystem::path& path);
SparseMatrix read_matrix_market(std::istream& in);

/// Writes coordinate/real/general with 17 significant digits.
void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path);
void write_matrix_market(const SparseMatrix& a, std::ostream& out);

}  // namespace pslr
