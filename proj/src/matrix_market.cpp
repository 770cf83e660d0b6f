#include "pslr/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pslr/error.hpp"

namespace pslr {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw ParseError(1, "empty file");
  ++line_no;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ParseError(line_no, "missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") throw ParseError(line_no, "unsupported object '" + object + "'");
  if (format != "coordinate") throw ParseError(line_no, "only coordinate format is supported");
  if (field != "real") throw ParseError(line_no, "unsupported field '" + field + "', expected real");
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general")
    throw ParseError(line_no, "unsupported symmetry '" + symmetry + "'");

  // comments, then the size line
  long long rows = -1, cols = -1, entries = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> entries) || rows < 0 || cols < 0 || entries < 0)
      throw ParseError(line_no, "malformed size line");
    break;
  }
  if (rows < 0) throw ParseError(line_no, "missing size line");
  if (symmetric && rows != cols) throw ParseError(line_no, "symmetric matrix must be square");

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(symmetric ? 2 * entries : entries));
  long long seen = 0;
  while (seen < entries && std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    std::istringstream entry(line);
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(entry >> i >> j >> v)) throw ParseError(line_no, "malformed entry");
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw ParseError(line_no, "index (" + std::to_string(i) + ", " + std::to_string(j) +
                                    ") outside declared range");
    const auto r = static_cast<Index>(i - 1);
    const auto c = static_cast<Index>(j - 1);
    triplets.push_back({r, c, v});
    if (symmetric && r != c) triplets.push_back({c, r, v});
    ++seen;
  }
  if (seen < entries)
    throw ParseError(line_no, "expected " + std::to_string(entries) + " entries, found " +
                                  std::to_string(seen));
  return SparseMatrix::from_triplets(static_cast<Index>(rows), static_cast<Index>(cols),
                                     triplets);
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_matrix_market(in);
}

void write_matrix_market(const SparseMatrix& a, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  char buf[64];
  for (Index i = 0; i < a.rows(); ++i) {
    const auto c = a.row_cols(i);
    const auto v = a.row_values(i);
    for (std::size_t k = 0; k < c.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", v[k]);
      out << (i + 1) << ' ' << (c[k] + 1) << ' ' << buf << '\n';
    }
  }
}

void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_matrix_market(a, out);
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace pslr
