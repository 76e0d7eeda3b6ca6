#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <stdexcept>

#include "spectrace/cli.hpp"
#include "spectrace/counterexamples.hpp"
#include "spectrace/errors.hpp"
#include "spectrace/finop.hpp"
#include "spectrace/lattice.hpp"
#include "spectrace/records.hpp"
#include "spectrace/special_fn.hpp"
#include "spectrace/torus_spectral.hpp"

namespace py = pybind11;
using namespace spectrace;

namespace {

// Records cross the boundary as JSON text; the package turns them into dicts.
std::string dump(const records::Json& j) { return j.dump(); }

torus::TraceClassification classify(const std::string& op, int power, double tol, int threads) {
  if (op == "s1") return torus::trace_inv_laplacian_s1(power, tol);
  if (op == "t2") return torus::trace_inv_laplacian_t2(power, tol, 2000, threads);
  if (op == "p") return torus::trace_p_power_t2(power, tol, 2000, threads);
  throw std::invalid_argument("trace: operator must be one of s1, t2, p");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Compiled core of spectrace";
  m.attr("__version__") = cli::tool_version();

  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);

  py::class_<special::BoundedValue>(m, "BoundedValue")
      .def_readonly("value", &special::BoundedValue::value)
      .def_readonly("error_bound", &special::BoundedValue::error_bound)
      .def_readonly("terms_used", &special::BoundedValue::terms_used)
      .def("__repr__", [](const special::BoundedValue& v) {
        std::ostringstream os;
        os.precision(17);
        os << "BoundedValue(value=" << v.value << ", error_bound=" << v.error_bound << ")";
        return os.str();
      });

  py::class_<lattice::SumOutcome>(m, "SumOutcome")
      .def_readonly("value", &lattice::SumOutcome::value)
      .def_readonly("abs_sum", &lattice::SumOutcome::abs_sum)
      .def_readonly("tail_bound", &lattice::SumOutcome::tail_bound)
      .def_readonly("terms", &lattice::SumOutcome::terms)
      .def_readonly("radius", &lattice::SumOutcome::radius);

  m.def("zeta", &special::zeta, py::arg("s"), py::arg("tol") = 1e-10);
  m.def("dirichlet_beta", &special::dirichlet_beta, py::arg("s"), py::arg("tol") = 1e-10);
  m.def("gamma_positive_integer", &special::gamma_positive_integer, py::arg("n"));
  m.def("theta3", &special::theta3, py::arg("t"), py::arg("tol") = 1e-10);
  m.def("mellin_theta", &special::mellin_theta, py::arg("n"), py::arg("tol") = 1e-10);

  m.def(
      "lattice_sum_direct",
      [](double n, std::int64_t radius, int threads) {
        lattice::SumOptions options;
        options.threads = threads;
        py::gil_scoped_release release;
        return lattice::lattice_sum_direct(n, radius, options);
      },
      py::arg("n"), py::arg("radius"), py::arg("threads") = 1);
  m.def("lattice_sum_closed", &lattice::lattice_sum_closed, py::arg("n"), py::arg("tol") = 1e-10);
  m.def("tail_bound", &lattice::tail_bound, py::arg("n"), py::arg("radius"));

  m.def(
      "_trace_json",
      [](const std::string& op, int power, double tol, int threads) {
        torus::TraceClassification t;
        {
          py::gil_scoped_release release;
          t = classify(op, power, tol, threads);
        }
        return dump(records::trace_record(t));
      },
      py::arg("operator"), py::arg("power"), py::arg("tol") = 1e-10, py::arg("threads") = 1);
  m.def(
      "_p2_certificate_json",
      [](int target) { return dump(records::certificate(torus::p2_divergence_certificate(target))); },
      py::arg("target"));
  m.def(
      "eigenvalue",
      [](const std::string& op, int power, std::int64_t k, std::int64_t m_) {
        if (op == "s1") return torus::eigenrule_eval({torus::OperatorKind::InvLaplaceS1, power}, torus::Mode::circle(k));
        if (op == "t2")
          return torus::eigenrule_eval({torus::OperatorKind::InvLaplaceT2, power}, torus::Mode::torus(k, m_));
        if (op == "p") return torus::eigenrule_eval({torus::OperatorKind::PPowerT2, power}, torus::Mode::torus(k, m_));
        throw std::invalid_argument("eigenvalue: operator must be one of s1, t2, p");
      },
      py::arg("operator"), py::arg("power"), py::arg("k"), py::arg("m") = 0);

  m.def(
      "diag_partial_sums",
      [](const std::string& name, std::int64_t count) {
        const auto example = counterexamples::parse_example(name);
        if (!example) throw std::invalid_argument("unknown example: " + name);
        return counterexamples::diag_partial_sums(*example, count);
      },
      py::arg("example"), py::arg("count"));
  m.def("psi_vector", [](std::int64_t n) { return counterexamples::psi_vector(n).coefficients; }, py::arg("n"));

  using finop::DenseOperator;
  using finop::Matrix;
  m.def("sqrt_psd", [](const Matrix& a, double tol) { return finop::sqrt_psd(DenseOperator(a), tol).matrix(); },
        py::arg("a"), py::arg("tol") = 1e-12);
  m.def("abs_op", [](const Matrix& a, double tol) { return finop::abs_op(DenseOperator(a), tol).matrix(); },
        py::arg("a"), py::arg("tol") = 1e-12);
  m.def("is_psd", [](const Matrix& a, double tol) { return finop::is_psd(DenseOperator(a), tol); }, py::arg("a"),
        py::arg("tol") = 1e-12);
  m.def(
      "trace_diag",
      [](const Matrix& a, const Matrix& basis) {
        return finop::trace_diag(DenseOperator(a), finop::OrthonormalBasis(basis));
      },
      py::arg("a"), py::arg("basis"));
  m.def(
      "trace_norm", [](const Matrix& a) { return finop::canonical_and_trace_norm(DenseOperator(a)).second; },
      py::arg("a"));
  m.def(
      "lidskii_check", [](const Matrix& a, double tol) { return finop::lidskii_check(DenseOperator(a), tol); },
      py::arg("a"), py::arg("tol") = 1e-8);
  m.def(
      "random_orthonormal_basis",
      [](std::size_t dim, std::uint64_t seed) { return finop::random_orthonormal_basis(dim, seed).columns(); },
      py::arg("dim"), py::arg("seed"));
  m.def(
      "random_operator",
      [](std::size_t dim, std::uint64_t seed) { return finop::random_operator(dim, seed).matrix(); },
      py::arg("dim"), py::arg("seed"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
