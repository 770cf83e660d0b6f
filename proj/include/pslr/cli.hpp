#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pslr/krylov.hpp"
#include "pslr/pslr.hpp"

namespace pslr::cli {

/// Everything that determines a run. Serialized with every default spelled
/// out so a manifest file reproduces a run exactly.
struct RunManifest {
  std::string problem;  ///< ProblemSpec text; exclusive with `matrix`
  std::string matrix;   ///< Matrix Market path
  int s = 35;
  int m = 3;
  Index rank = 15;
  double droptol = 1e-2;
  std::string krylov = "gmres";
  double tol = 1e-8;
  int maxit = 500;
  int restart = 0;
  std::uint64_t seed = 0;  ///< Arnoldi start vector; the solution vector uses seed + 1
  int threads = 0;         ///< 0 = hardware cores
  std::string out;         ///< stats JSON / CSV destination; empty = stdout
  std::string partition_out;

  std::string rng() const { return "mt19937_64"; }
  PslrConfig pslr_config() const;
  KrylovOptions krylov_options() const;
  /// Throws Error on inconsistent fields.
  void validate() const;

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);

struct SolveStats {
  int its = 0;
  bool converged = false;
  double fill_ilu = 0.0;
  double fill_lowrank = 0.0;
  double fill_total = 0.0;
  double o_t = 0.0;
  double p_t = 0.0;
  double i_t = 0.0;
  double t_t = 0.0;  ///< p_t + i_t
  double final_relres = 1.0;
  std::size_t pivot_repairs = 0;
  std::string failure;  ///< solver exception text when the run broke down
};

nlohmann::json to_json(const SolveStats& stats);

/// Builds A from the manifest's problem or matrix.
SparseMatrix load_operator(const RunManifest& manifest);

/// b = A x with x = seeded_random_vector(n, seed + 1).
Vector make_rhs(const SparseMatrix& a, std::uint64_t seed);

SolveStats run_solve(const SparseMatrix& a, const RunManifest& manifest);

enum class SweepAxis { s, m, rank };
SweepAxis parse_sweep_axis(const std::string& name);

struct SweepRow {
  double value = 0.0;
  SolveStats stats;
};

/// One row per value. The m and rank axes share one partition and one set of
/// ILU factors; the rank axis also shares one Arnoldi run of the largest rank.
std::vector<SweepRow> run_sweep(const SparseMatrix& a, const RunManifest& manifest, SweepAxis axis,
                                const std::vector<double>& values);

std::string sweep_csv(SweepAxis axis, const std::vector<SweepRow>& rows);

enum class SpectrumTarget { es_c0inv, err, prec_s };
SpectrumTarget parse_spectrum_target(const std::string& name);

/// Dense spectrum of E_s C0^{-1}, E_rr(m) or S_app^{-1} S for the manifest's
/// (s, m, rank). Factorizations are exact (droptol 0); the interface size q
/// must not exceed kDenseOracleLimit.
DenseMatrix spectrum_operator(const SparseMatrix& a, const RunManifest& manifest,
                              SpectrumTarget target);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

/// Full command-line entry point; `out` receives JSON/CSV, `err` messages.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pslr::cli
