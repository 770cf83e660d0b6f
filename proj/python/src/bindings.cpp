#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "pslr/cli.hpp"
#include "pslr/diagnostics.hpp"
#include "pslr/error.hpp"
#include "pslr/krylov.hpp"
#include "pslr/matrix_market.hpp"
#include "pslr/problems.hpp"
#include "pslr/pslr.hpp"

namespace py = pybind11;
using namespace pslr;

namespace {

SparseMatrix csr_from_arrays(Index rows, Index cols, py::array_t<std::int64_t> indptr,
                             py::array_t<std::int64_t> indices, py::array_t<double> data) {
  auto p = indptr.unchecked<1>();
  auto c = indices.unchecked<1>();
  auto v = data.unchecked<1>();
  std::vector<std::size_t> row_ptr(p.shape(0));
  for (py::ssize_t i = 0; i < p.shape(0); ++i) {
    if (p(i) < 0) throw DimensionError("csr: negative row pointer");
    row_ptr[i] = static_cast<std::size_t>(p(i));
  }
  std::vector<Index> col_idx(c.data(0), c.data(0) + c.shape(0));
  std::vector<double> values(v.data(0), v.data(0) + v.shape(0));
  return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

py::tuple csr_arrays(const SparseMatrix& a) {
  py::array_t<std::int64_t> indptr(static_cast<py::ssize_t>(a.row_ptr().size()));
  py::array_t<std::int64_t> indices(static_cast<py::ssize_t>(a.nnz()));
  py::array_t<double> data(static_cast<py::ssize_t>(a.nnz()));
  std::copy(a.row_ptr().begin(), a.row_ptr().end(), indptr.mutable_data());
  std::copy(a.col_idx().begin(), a.col_idx().end(), indices.mutable_data());
  std::copy(a.values().begin(), a.values().end(), data.mutable_data());
  return py::make_tuple(data, indices, indptr);
}

py::dict report_dict(const SolveReport& r) {
  py::dict d;
  d["converged"] = r.converged;
  d["iterations"] = r.iterations;
  d["final_relres"] = r.final_relres;
  d["history"] = r.history;
  d["seconds"] = r.seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Power series Schur complement low-rank preconditioner";

  py::register_exception<Error>(m, "PslrError", PyExc_RuntimeError);

  py::class_<SparseMatrix>(m, "SparseMatrix")
      .def(py::init(&csr_from_arrays), py::arg("rows"), py::arg("cols"), py::arg("indptr"),
           py::arg("indices"), py::arg("data"))
      .def_property_readonly("shape",
                             [](const SparseMatrix& a) { return py::make_tuple(a.rows(), a.cols()); })
      .def_property_readonly("nnz", &SparseMatrix::nnz)
      .def("csr", &csr_arrays, "(data, indices, indptr) copies of the CSR arrays")
      .def("matvec", [](const SparseMatrix& a, const Vector& x) { return matvec(a, x); })
      .def("to_dense", &SparseMatrix::to_dense);

  m.def("problem", [](const std::string& text) {
        const ProblemSpec spec = ProblemSpec::parse(text);
        return spec.has_convection() ? convdiff3d(spec) : laplacian3d(spec);
      },
      py::arg("spec"), "Matrix for 'lap3d:nx,ny,nz,shift' or 'convdiff3d:nx,ny,nz,shift,gx,gy,gz'");
  m.def("count_negative_eigs",
        [](const std::string& text) { return count_negative_eigs_analytic(ProblemSpec::parse(text)); },
        py::arg("spec"));
  m.def("read_matrix_market", py::overload_cast<const std::filesystem::path&>(&read_matrix_market));
  m.def("write_matrix_market",
        py::overload_cast<const SparseMatrix&, const std::filesystem::path&>(&write_matrix_market));
  m.def("seeded_random_vector", &seeded_random_vector, py::arg("n"), py::arg("seed"));

  py::class_<PslrConfig>(m, "PslrConfig")
      .def(py::init([](int s, int mm, Index rank, double droptol, std::uint64_t seed) {
             return PslrConfig{s, mm, rank, droptol, seed, {}};
           }),
           py::arg("s") = 35, py::arg("m") = 3, py::arg("rank") = 15, py::arg("droptol") = 1e-2,
           py::arg("seed") = 0)
      .def_readwrite("s", &PslrConfig::s)
      .def_readwrite("m", &PslrConfig::m)
      .def_readwrite("rank", &PslrConfig::rank)
      .def_readwrite("droptol", &PslrConfig::droptol)
      .def_readwrite("seed", &PslrConfig::seed);

  py::class_<PslrPreconditioner>(m, "Preconditioner")
      .def(py::init(&PslrPreconditioner::build), py::arg("a"), py::arg("config") = PslrConfig{},
           py::call_guard<py::gil_scoped_release>())
      .def("apply",
           [](const PslrPreconditioner& p, const Vector& b) {
             return p.restore(p.apply(p.reorder(b)));
           },
           py::arg("b"), "z = PSLR(b) in the original numbering")
      .def_property_readonly("fill", [](const PslrPreconditioner& p) {
        const FillStats& f = p.fill_stats();
        py::dict d;
        d["fill_ilu"] = f.fill_ilu;
        d["fill_lowrank"] = f.fill_lowrank;
        d["fill_total"] = f.fill_total;
        d["pivot_repairs"] = f.pivot_repairs;
        return d;
      })
      .def_property_readonly("rank", [](const PslrPreconditioner& p) { return p.correction().rank(); })
      .def_property_readonly("interface_size",
                             [](const PslrPreconditioner& p) { return p.system().q; });

  m.def("solve",
        [](const SparseMatrix& a, const Vector& b, const PslrPreconditioner& p,
           const std::string& method, double tol, int maxit, int restart) {
          const KrylovMethod km = parse_krylov_method(method);
          SolveResult res;
          {
            py::gil_scoped_release release;
            res = solve(a, b, p, km, KrylovOptions{tol, maxit, restart});
          }
          return py::make_tuple(res.x, report_dict(res.report));
        },
        py::arg("a"), py::arg("b"), py::arg("precond"), py::arg("method") = "gmres",
        py::arg("tol") = 1e-8, py::arg("maxit") = 500, py::arg("restart") = 0,
        "Returns (x, report).");

  m.def("eigenvalues",
        [](const DenseMatrix& mat) {
          const SpectrumReport rep = spectrum(mat);
          return std::vector<std::complex<double>>(rep.eigenvalues.begin(), rep.eigenvalues.end());
        },
        py::arg("matrix"), "Dense eigenvalues sorted by decreasing modulus");

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::vector<const char*> argv{"pslr"};
          for (const auto& a : args) argv.push_back(a.c_str());
          std::ostringstream out, err;
          const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line tool in-process; returns (code, stdout, stderr).");
}
