#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

namespace pslr {

using Index = std::int32_t;

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

inline std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
inline std::span<double> as_span(Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

/// Deterministic uniform(-1, 1) vector from a 64-bit Mersenne twister.
///
/// The mapping from engine output to doubles is spelled out here rather
/// than left to std::uniform_real_distribution so that vectors are
/// identical across standard library implementations.
Vector seeded_random_vector(Index n, std::uint64_t seed);

}  // namespace pslr
