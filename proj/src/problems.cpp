#include "pslr/problems.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <vector>

#include "pslr/error.hpp"

namespace pslr {

namespace {

std::vector<double> split_numbers(std::string_view body) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(body)};
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error("problem spec: bad number '" + item + "'");
    }
  }
  return out;
}

Index as_extent(double v) {
  if (v < 1 || v != std::floor(v) || v > 2e4) throw Error("problem spec: grid extents must be positive integers");
  return static_cast<Index>(v);
}

}  // namespace

ProblemSpec ProblemSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw Error("problem spec: expected NAME:ARGS");
  const std::string_view name = text.substr(0, colon);
  const std::vector<double> args = split_numbers(text.substr(colon + 1));
  ProblemSpec spec;
  if (name == "lap3d") {
    if (args.size() != 4) throw Error("problem spec: lap3d takes nx,ny,nz,shift");
  } else if (name == "convdiff3d") {
    if (args.size() != 7) throw Error("problem spec: convdiff3d takes nx,ny,nz,shift,gx,gy,gz");
    spec.convection = {args[4], args[5], args[6]};
  } else {
    throw Error("problem spec: unknown problem '" + std::string(name) + "'");
  }
  spec.nx = as_extent(args[0]);
  spec.ny = as_extent(args[1]);
  spec.nz = as_extent(args[2]);
  spec.shift = args[3];
  return spec;
}

std::string ProblemSpec::to_string() const {
  char buf[256];
  if (has_convection())
    std::snprintf(buf, sizeof buf, "convdiff3d:%d,%d,%d,%.17g,%.17g,%.17g,%.17g", nx, ny, nz, shift,
                  convection[0], convection[1], convection[2]);
  else
    std::snprintf(buf, sizeof buf, "lap3d:%d,%d,%d,%.17g", nx, ny, nz, shift);
  return buf;
}

SparseMatrix convdiff3d(const ProblemSpec& spec) {
  if (spec.nx < 1 || spec.ny < 1 || spec.nz < 1) throw Error("grid extents must be >= 1");
  const Index nx = spec.nx, ny = spec.ny, nz = spec.nz;
  const Index n = spec.size();
  const std::array<Index, 3> extent{nx, ny, nz};
  const std::array<Index, 3> stride{1, nx, nx * ny};
  std::array<double, 3> half{};
  for (int d = 0; d < 3; ++d) half[d] = 0.5 * spec.convection[d] / (extent[d] + 1);

  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  col_idx.reserve(static_cast<std::size_t>(n) * 7);
  values.reserve(static_cast<std::size_t>(n) * 7);
  for (Index k = 0; k < nz; ++k)
    for (Index j = 0; j < ny; ++j)
      for (Index i = 0; i < nx; ++i) {
        const Index row = i + nx * (j + ny * k);
        const std::array<Index, 3> pos{i, j, k};
        // emitted in increasing column order: -z, -y, -x, diag, +x, +y, +z
        for (int d = 2; d >= 0; --d)
          if (pos[d] > 0) {
            col_idx.push_back(row - stride[d]);
            values.push_back(-1.0 + half[d]);
          }
        col_idx.push_back(row);
        values.push_back(6.0 - spec.shift);
        for (int d = 0; d < 3; ++d)
          if (pos[d] + 1 < extent[d]) {
            col_idx.push_back(row + stride[d]);
            values.push_back(-1.0 - half[d]);
          }
        row_ptr[row + 1] = col_idx.size();
      }
  return SparseMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrix laplacian3d(const ProblemSpec& spec) {
  ProblemSpec plain = spec;
  plain.convection = {0.0, 0.0, 0.0};
  return convdiff3d(plain);
}

Index count_negative_eigs_analytic(const ProblemSpec& spec) {
  auto modes = [](Index extent) {
    std::vector<double> c(extent);
    for (Index i = 1; i <= extent; ++i) c[i - 1] = std::cos(i * std::numbers::pi / (extent + 1));
    return c;
  };
  const auto cx = modes(spec.nx), cy = modes(spec.ny), cz = modes(spec.nz);
  Index count = 0;
  for (double a : cx)
    for (double b : cy)
      for (double c : cz)
        if (6.0 - 2.0 * (a + b + c) < spec.shift) ++count;
  return count;
}

}  // namespace pslr
