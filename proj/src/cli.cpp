#include "pslr/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pslr/diagnostics.hpp"
#include "pslr/error.hpp"
#include "pslr/matrix_market.hpp"
#include "pslr/parallel.hpp"
#include "pslr/partition.hpp"
#include "pslr/problems.hpp"

namespace pslr::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SolveStats failed_stats(const RunManifest& manifest, std::string why) {
  SolveStats st;
  st.its = manifest.maxit;
  st.converged = false;
  st.failure = std::move(why);
  return st;
}

SolveStats solve_with(const SparseMatrix& a, const Vector& b, const PslrPreconditioner& precond,
                      const RunManifest& manifest) {
  const FillStats& fill = precond.fill_stats();
  SolveStats st;
  st.fill_ilu = fill.fill_ilu;
  st.fill_lowrank = fill.fill_lowrank;
  st.fill_total = fill.fill_total;
  st.pivot_repairs = fill.pivot_repairs;
  st.o_t = fill.order_time_s;
  st.p_t = fill.build_time_s;
  try {
    const SolveResult res = solve(a, b, precond, parse_krylov_method(manifest.krylov),
                                  manifest.krylov_options());
    st.its = res.report.iterations;
    st.converged = res.report.converged;
    st.final_relres = res.report.final_relres;
    st.i_t = res.report.seconds;
  } catch (const NotSpdError& e) {
    st.its = manifest.maxit;
    st.failure = e.what();
  } catch (const DivergenceError& e) {
    st.its = manifest.maxit;
    st.failure = e.what();
  }
  st.t_t = st.p_t + st.i_t;
  return st;
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!f) throw Error("write failed for " + path);
}

void dump_partition(const SparseMatrix& a, const RunManifest& manifest) {
  if (manifest.partition_out.empty()) return;
  const PartitionSpec spec = partition_graph(a, manifest.s, manifest.seed);
  write_text(manifest.partition_out, nlohmann::json(spec.assignment).dump() + "\n", std::cout);
}

}  // namespace

PslrConfig RunManifest::pslr_config() const {
  PslrConfig cfg;
  cfg.s = s;
  cfg.m = m;
  cfg.rank = rank;
  cfg.droptol = droptol;
  cfg.seed = seed;
  return cfg;
}

KrylovOptions RunManifest::krylov_options() const { return {tol, maxit, restart}; }

void RunManifest::validate() const {
  if (problem.empty() == matrix.empty())
    throw Error("manifest: exactly one of problem and matrix must be set");
  pslr_config().validate();
  parse_krylov_method(krylov);
  if (!(tol > 0.0)) throw Error("manifest: tol must be > 0");
  if (maxit < 1) throw Error("manifest: maxit must be >= 1");
  if (restart < 0) throw Error("manifest: restart must be >= 0");
  if (threads < 0) throw Error("manifest: threads must be >= 0");
}

nlohmann::json to_json(const RunManifest& mf) {
  return {{"problem", mf.problem},   {"matrix", mf.matrix},   {"s", mf.s},
          {"m", mf.m},               {"rank", mf.rank},       {"droptol", mf.droptol},
          {"krylov", mf.krylov},     {"tol", mf.tol},         {"maxit", mf.maxit},
          {"restart", mf.restart},   {"seed", mf.seed},       {"rng", mf.rng()},
          {"threads", mf.threads},   {"out", mf.out},         {"partition_out", mf.partition_out}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("manifest: expected a JSON object");
  RunManifest mf;
  auto get = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("manifest: bad field '") + key + "': " + e.what());
    }
  };
  get("problem", mf.problem);
  get("matrix", mf.matrix);
  get("s", mf.s);
  get("m", mf.m);
  get("rank", mf.rank);
  get("droptol", mf.droptol);
  get("krylov", mf.krylov);
  get("tol", mf.tol);
  get("maxit", mf.maxit);
  get("restart", mf.restart);
  get("seed", mf.seed);
  get("threads", mf.threads);
  get("out", mf.out);
  get("partition_out", mf.partition_out);
  if (j.contains("rng") && j.at("rng") != mf.rng())
    throw Error("manifest: unsupported rng '" + j.at("rng").dump() + "'");
  return mf;
}

nlohmann::json to_json(const SolveStats& st) {
  nlohmann::json j = {{"its", st.its},
                      {"converged", st.converged},
                      {"fill_ilu", st.fill_ilu},
                      {"fill_lowrank", st.fill_lowrank},
                      {"fill_total", st.fill_total},
                      {"o_t", st.o_t},
                      {"p_t", st.p_t},
                      {"i_t", st.i_t},
                      {"t_t", st.t_t},
                      {"final_relres", st.final_relres},
                      {"pivot_repairs", st.pivot_repairs}};
  if (!st.failure.empty()) j["failure"] = st.failure;
  return j;
}

SparseMatrix load_operator(const RunManifest& mf) {
  if (!mf.problem.empty()) return convdiff3d(ProblemSpec::parse(mf.problem));
  return read_matrix_market(mf.matrix);
}

Vector make_rhs(const SparseMatrix& a, std::uint64_t seed) {
  return matvec(a, seeded_random_vector(a.rows(), seed + 1));
}

SolveStats run_solve(const SparseMatrix& a, const RunManifest& mf) {
  const Vector b = make_rhs(a, mf.seed);
  try {
    const PslrPreconditioner precond = PslrPreconditioner::build(a, mf.pslr_config());
    return solve_with(a, b, precond, mf);
  } catch (const SingularCorrectionError& e) {
    return failed_stats(mf, e.what());
  }
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "s") return SweepAxis::s;
  if (name == "m") return SweepAxis::m;
  if (name == "rank") return SweepAxis::rank;
  throw Error("unknown sweep axis '" + name + "' (expected s, m or rank)");
}

std::vector<SweepRow> run_sweep(const SparseMatrix& a, const RunManifest& mf, SweepAxis axis,
                                const std::vector<double>& values) {
  for (double v : values)
    if (v < 0 || v != std::floor(v) || v > 1e9)
      throw Error("sweep: values must be non-negative integers");
  const Vector b = make_rhs(a, mf.seed);
  std::vector<SweepRow> rows;
  rows.reserve(values.size());

  if (axis == SweepAxis::s) {
    for (double v : values) {
      RunManifest row_mf = mf;
      row_mf.s = static_cast<int>(v);
      SolveStats st;
      try {
        const PslrPreconditioner precond = PslrPreconditioner::build(a, row_mf.pslr_config());
        st = solve_with(a, b, precond, row_mf);
      } catch (const Error& e) {
        st = failed_stats(row_mf, e.what());
      }
      rows.push_back({v, st});
    }
    return rows;
  }

  mf.pslr_config().validate();
  auto t0 = Clock::now();
  PartitionedSystem system = classify_and_reorder(a, partition_graph(a, mf.s, mf.seed));
  const double order_t = seconds_since(t0);
  t0 = Clock::now();
  auto ctx = std::make_shared<const SchurContext>(std::move(system), IluOptions{mf.droptol, {}});
  const double ilu_t = seconds_since(t0);

  std::optional<ArnoldiResult> shared_run;
  double arnoldi_t = 0.0;
  if (axis == SweepAxis::rank && !values.empty()) {
    const double top = *std::max_element(values.begin(), values.end());
    t0 = Clock::now();
    shared_run = PslrPreconditioner::error_arnoldi(*ctx, mf.m, static_cast<Index>(top), mf.seed);
    arnoldi_t = seconds_since(t0);
  }

  for (double v : values) {
    RunManifest row_mf = mf;
    SolveStats st;
    try {
      t0 = Clock::now();
      LowRankCorrection corr;
      if (axis == SweepAxis::m) {
        row_mf.m = static_cast<int>(v);
        corr = LowRankCorrection::from_arnoldi(
            PslrPreconditioner::error_arnoldi(*ctx, row_mf.m, mf.rank, mf.seed));
      } else {
        row_mf.rank = static_cast<Index>(v);
        corr = LowRankCorrection::from_arnoldi(*shared_run, row_mf.rank);
      }
      const double p_t = ilu_t + arnoldi_t + seconds_since(t0);
      const PslrPreconditioner precond =
          PslrPreconditioner::from_context(ctx, row_mf.m, std::move(corr), order_t, p_t);
      st = solve_with(a, b, precond, row_mf);
    } catch (const SingularCorrectionError& e) {
      st = failed_stats(row_mf, e.what());
    }
    rows.push_back({v, st});
  }
  return rows;
}

std::string sweep_csv(SweepAxis axis, const std::vector<SweepRow>& rows) {
  static constexpr const char* kNames[] = {"s", "m", "rank"};
  std::ostringstream out;
  out << "axis,value,its,converged,fill_ilu,fill_lowrank,fill_total,o_t,p_t,i_t,t_t,final_relres\n";
  for (const SweepRow& r : rows) {
    const SolveStats& st = r.stats;
    out << kNames[static_cast<int>(axis)] << ',' << static_cast<long long>(r.value) << ','
        << st.its << ',' << (st.converged ? "true" : "false") << ',' << format_double(st.fill_ilu)
        << ',' << format_double(st.fill_lowrank) << ',' << format_double(st.fill_total) << ','
        << format_double(st.o_t) << ',' << format_double(st.p_t) << ',' << format_double(st.i_t)
        << ',' << format_double(st.t_t) << ',' << format_double(st.final_relres) << '\n';
  }
  return out.str();
}

SpectrumTarget parse_spectrum_target(const std::string& name) {
  if (name == "EsC0inv") return SpectrumTarget::es_c0inv;
  if (name == "Err") return SpectrumTarget::err;
  if (name == "precS") return SpectrumTarget::prec_s;
  throw Error("unknown spectrum target '" + name + "' (expected EsC0inv, Err or precS)");
}

DenseMatrix spectrum_operator(const SparseMatrix& a, const RunManifest& mf, SpectrumTarget target) {
  mf.pslr_config().validate();
  // droptol 0 without a fill cap is an exact LU, so every operator below is
  // exact up to rounding; only the q x q interface matrix is formed densely
  auto ctx = std::make_shared<const SchurContext>(
      classify_and_reorder(a, partition_graph(a, mf.s, mf.seed)), IluOptions{0.0, {}});
  const Index q = ctx->interface_size();
  if (q > kDenseOracleLimit)
    throw Error("spectrum: interface size " + std::to_string(q) + " exceeds the dense limit of " +
                std::to_string(kDenseOracleLimit) + "; use fewer subdomains or a smaller grid");
  switch (target) {
    case SpectrumTarget::es_c0inv:
      return assemble([&](const Vector& v) -> Vector { return ctx->apply_es(ctx->solve_c0(v)); }, q);
    case SpectrumTarget::err: {
      const NeumannConfig cfg(mf.m);
      return assemble([&](const Vector& v) -> Vector { return ctx->apply_error(cfg, v); }, q);
    }
    case SpectrumTarget::prec_s: {
      LowRankCorrection corr = LowRankCorrection::from_arnoldi(
          PslrPreconditioner::error_arnoldi(*ctx, mf.m, mf.rank, mf.seed));
      const PslrPreconditioner p = PslrPreconditioner::from_context(ctx, mf.m, std::move(corr));
      return assemble([&](const Vector& v) -> Vector { return p.apply_schur_inverse(ctx->apply_s(v)); },
                      q);
    }
  }
  throw Error("spectrum: unreachable target");
}

namespace {

/// Holds option storage and writes explicitly given options onto a manifest.
class ManifestFlags {
 public:
  void attach(CLI::App* app) {
    add(app, "--problem", "PROBLEM", &RunManifest::problem,
        "generated problem: lap3d:nx,ny,nz,shift or convdiff3d:nx,ny,nz,shift,gx,gy,gz");
    add(app, "--matrix", "MATRIX", &RunManifest::matrix, "Matrix Market file");
    add(app, "--s", "S", &RunManifest::s, "number of subdomains (default 35)");
    add(app, "--m", "M", &RunManifest::m, "power series degree (default 3)");
    add(app, "--rank", "RANK", &RunManifest::rank, "low-rank correction rank (default 15)");
    add(app, "--droptol", "DROPTOL", &RunManifest::droptol, "ILUT drop tolerance (default 1e-2)");
    add(app, "--krylov", "KRYLOV", &RunManifest::krylov, "gmres or cg (default gmres)")
        ->check(CLI::IsMember({"gmres", "cg"}));
    add(app, "--tol", "TOL", &RunManifest::tol, "relative residual tolerance (default 1e-8)");
    add(app, "--maxit", "MAXIT", &RunManifest::maxit, "iteration limit (default 500)");
    add(app, "--restart", "RESTART", &RunManifest::restart,
        "GMRES restart length, 0 = full (default 0)");
    add(app, "--seed", "SEED", &RunManifest::seed, "random seed (default 0)");
    add(app, "--threads", "THREADS", &RunManifest::threads,
        "worker threads, 0 = hardware cores (default 0)");
    add(app, "--out", "OUT", &RunManifest::out, "output file (default stdout)");
    add(app, "--partition-out", "PARTITION_OUT", &RunManifest::partition_out,
        "write the vertex-to-subdomain assignment as a JSON array");
    app->add_option("--manifest", manifest_path_, "start from a JSON run manifest")
        ->envname("PSLR_MANIFEST");
    app->add_option("--write-manifest", write_manifest_path_,
                    "write the effective manifest as JSON")
        ->envname("PSLR_WRITE_MANIFEST");
  }

  RunManifest resolve() const {
    RunManifest mf;
    if (!manifest_path_.empty()) {
      std::ifstream in(manifest_path_);
      if (!in) throw Error("cannot open manifest " + manifest_path_);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw Error("manifest " + manifest_path_ + ": " + e.what());
      }
      mf = manifest_from_json(j);
    }
    for (const auto& [opt, apply] : bindings_)
      if (opt->count() > 0) apply(mf);
    // an explicit source on the command line replaces the manifest's source
    for (const auto& [opt, apply] : bindings_) {
      if (opt->count() == 0) continue;
      if (opt->get_name() == "--problem") mf.matrix.clear();
      if (opt->get_name() == "--matrix") mf.problem.clear();
    }
    mf.validate();
    return mf;
  }

  const std::string& write_manifest_path() const { return write_manifest_path_; }

 private:
  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& flag, const std::string& env,
                   T RunManifest::*field, const std::string& help) {
    auto store = std::make_shared<T>();
    CLI::Option* opt = app->add_option(flag, *store, help)->envname("PSLR_" + env);
    bindings_.emplace_back(opt, [store, field](RunManifest& mf) { mf.*field = *store; });
    return opt;
  }

  std::vector<std::pair<CLI::Option*, std::function<void(RunManifest&)>>> bindings_;
  std::string manifest_path_;
  std::string write_manifest_path_;
};

void prepare(const RunManifest& mf, const ManifestFlags& flags) {
  set_num_threads(mf.threads > 0 ? mf.threads : hardware_threads());
  if (!flags.write_manifest_path().empty())
    write_text(flags.write_manifest_path(), to_json(mf).dump(2) + "\n", std::cout);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"PSLR preconditioned Krylov solver"};
  app.require_subcommand(1);

  CLI::App* solve_cmd = app.add_subcommand("solve", "build PSLR and solve A x = b");
  ManifestFlags solve_flags;
  solve_flags.attach(solve_cmd);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "solve across values of s, m or rank");
  ManifestFlags sweep_flags;
  sweep_flags.attach(sweep_cmd);
  std::string axis_name;
  std::vector<double> values;
  sweep_cmd->add_option("--axis", axis_name, "s, m or rank")
      ->required()
      ->check(CLI::IsMember({"s", "m", "rank"}))
      ->envname("PSLR_AXIS");
  sweep_cmd->add_option("--values", values, "comma-separated axis values")
      ->required()
      ->delimiter(',')
      ->envname("PSLR_VALUES");

  CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "dense eigenvalues as re,im CSV");
  ManifestFlags spectrum_flags;
  spectrum_flags.attach(spectrum_cmd);
  std::string target_name;
  spectrum_cmd->add_option("--target", target_name, "EsC0inv, Err or precS")
      ->required()
      ->check(CLI::IsMember({"EsC0inv", "Err", "precS"}))
      ->envname("PSLR_TARGET");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (app.exit(e, out, err) == 0) return kExitOk;
    return kExitError;
  }

  try {
    if (solve_cmd->parsed()) {
      const RunManifest mf = solve_flags.resolve();
      prepare(mf, solve_flags);
      const SparseMatrix a = load_operator(mf);
      dump_partition(a, mf);
      const SolveStats st = run_solve(a, mf);
      nlohmann::json j = to_json(st);
      j["manifest"] = to_json(mf);
      const std::string text = j.dump(2) + "\n";
      if (!mf.out.empty()) write_text(mf.out, text, out);
      out << text;
      if (!st.failure.empty()) err << "solver failure: " << st.failure << "\n";
      return st.converged ? kExitOk : kExitNotConverged;
    }
    if (sweep_cmd->parsed()) {
      const RunManifest mf = sweep_flags.resolve();
      prepare(mf, sweep_flags);
      const SparseMatrix a = load_operator(mf);
      dump_partition(a, mf);
      const SweepAxis axis = parse_sweep_axis(axis_name);
      write_text(mf.out, sweep_csv(axis, run_sweep(a, mf, axis, values)), out);
      return kExitOk;
    }
    const RunManifest mf = spectrum_flags.resolve();
    prepare(mf, spectrum_flags);
    const SparseMatrix a = load_operator(mf);
    dump_partition(a, mf);
    const SpectrumReport rep = spectrum(spectrum_operator(a, mf, parse_spectrum_target(target_name)));
    if (mf.out.empty()) {
      out << "re,im\n";
      for (const auto& z : rep.eigenvalues) out << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
    } else {
      emit_spectrum_csv(rep, mf.out);
    }
    err << "spectral radius " << format_double(rep.spectral_radius) << ", " << rep.modulus_above_one
        << " eigenvalue(s) with modulus > 1\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace pslr::cli
