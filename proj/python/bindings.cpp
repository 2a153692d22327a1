#include "mixhess/commands.hpp"
#include "mixhess/errors.hpp"
#include "mixhess/identities.hpp"
#include "mixhess/io.hpp"
#include "mixhess/verify.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace mixhess;

namespace {

Spectrum spectrum(const std::vector<double>& v) { return Spectrum(v); }

HermitianMatrix hermitian(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) throw ArgumentError("expected a square matrix");
    if (!m.isApprox(m.adjoint(), 1e-12) && (m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-14)
        throw ArgumentError("matrix is not Hermitian");
    return HermitianMatrix{m};
}

py::dict solve_report_dict(const SolveReport& r, const Discretization& disc) {
    const auto& g = disc.grid();
    py::array_t<double> values(g.num_unknowns());
    py::array_t<double> coords({static_cast<py::ssize_t>(g.num_unknowns()), static_cast<py::ssize_t>(g.dim())});
    auto v = values.mutable_unchecked<1>();
    auto c = coords.mutable_unchecked<2>();
    for (std::int32_t q = 0; q < g.num_unknowns(); ++q) {
        v(q) = r.solution[q];
        const auto t = g.unknown_coords(q);
        for (int a = 0; a < g.dim(); ++a) c(q, a) = t[a];
    }
    const auto est = check_solution(r, disc);
    py::dict d;
    d["values"] = values;
    d["coords"] = coords;
    d["iterations"] = r.iterations;
    d["interior_residual"] = r.interior_residual;
    d["boundary_residual"] = r.boundary_residual;
    d["margin"] = r.margin;
    d["h"] = g.spacing();
    d["estimates"] = py::module_::import("json").attr("loads")(to_json(est).dump());
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mixed complex Hessian equations: symmetric functions, operator, solver and oracles";

    // Translators are tried newest first, so the base class goes first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<AdmissibilityError>(m, "AdmissibilityError", PyExc_RuntimeError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<VerificationError>(m, "VerificationError", PyExc_RuntimeError);

    // Symmetric functions.
    m.def("sigma", [](int k, const std::vector<double>& l) { return sigma(k, spectrum(l)); }, py::arg("m"), py::arg("lam"));
    m.def("sigma_reduced",
          [](int k, const std::vector<double>& l, const std::vector<int>& ex) {
              return sigma_reduced(k, spectrum(l), std::span<const int>(ex));
          },
          py::arg("m"), py::arg("lam"), py::arg("excluded"));
    m.def("in_cone",
          [](int k, const std::vector<double>& l) {
              const auto c = in_cone(k, spectrum(l));
              return py::make_tuple(c.member, c.sigmas);
          },
          py::arg("k"), py::arg("lam"));
    m.def("cone_margin", [](int k, const std::vector<double>& l) { return cone_margin(k, l); });
    m.def("sample_cone",
          [](int k, int n, std::uint64_t seed, int count) {
              std::vector<std::vector<double>> out;
              for (const auto& s : sample_cone(k, n, seed, count)) out.emplace_back(s.values().begin(), s.values().end());
              return out;
          },
          py::arg("k"), py::arg("n"), py::arg("seed"), py::arg("count"));
    m.def("binomial", &binomial);

    // Complex Hessians.
    m.def("to_complex_hessian", [](const Eigen::MatrixXd& d2) { return to_complex_hessian(RealHessian{d2}).entries; });
    m.def("hermitian_eigen",
          [](const Eigen::MatrixXcd& h) {
              const auto e = hermitian_eigen(hermitian(h));
              return py::make_tuple(std::vector<double>(e.lambda.values().begin(), e.lambda.values().end()), e.vectors,
                                    e.residual);
          });
    m.def("admissible", [](int k, const Eigen::MatrixXcd& h, double margin) { return admissible(k, hermitian(h), margin); },
          py::arg("k"), py::arg("h"), py::arg("margin") = 0.0);

    // Operator.
    m.def("g_value", [](int k, const std::vector<double>& a, const std::vector<double>& l) { return g_value(k, a, spectrum(l)); },
          py::arg("k"), py::arg("alpha"), py::arg("lam"));
    m.def("g_gradient",
          [](int k, const std::vector<double>& a, const Eigen::MatrixXcd& h) {
              return g_jet(k, a, hermitian(h)).gradient.entries;
          },
          py::arg("k"), py::arg("alpha"), py::arg("h"));
    m.def("real_form", [](const Eigen::MatrixXcd& g) { return real_form(HermitianMatrix{g}); });
    m.def("ratio_bounds",
          [](int n, int k, const std::vector<double>& inf_alpha, double sup_sum) {
              const auto b = ratio_bounds(n, k, inf_alpha, sup_sum);
              py::dict d;
              d["lower"] = b.lower;
              d["upper"] = b.upper;
              d["ratio_uppers"] = b.ratio_uppers;
              d["c_nk"] = b.c_nk;
              return d;
          });
    m.def("trace_values",
          [](int k, const std::vector<double>& a, const Eigen::MatrixXcd& h) {
              const auto t = trace_values(k, a, hermitian_eigen(hermitian(h)));
              return py::make_tuple(t.trace, t.weighted);
          });
    m.def("concavity_probe", [](int k, const std::vector<double>& a, const Eigen::MatrixXcd& h0, const Eigen::MatrixXcd& h1) {
        return concavity_probe(k, a, hermitian(h0), hermitian(h1));
    });

    // Constants.
    m.def("compute_A", [](int n, int k, const std::vector<double>& sup) { return compute_A(n, k, sup); });
    m.def("compute_M0", [](int n, int k, const std::vector<double>& sup, double max_phi, double diam) {
        return compute_M0(n, k, sup, max_phi, diam);
    });

    // Radial oracle.
    m.def("radial_sigma", &radial_sigma, py::arg("m"), py::arg("g"), py::arg("sg_prime"), py::arg("n"));
    py::class_<RadialProfile>(m, "RadialProfile")
        .def_property_readonly("s", &RadialProfile::s)
        .def_property_readonly("g", &RadialProfile::g)
        .def_property_readonly("F", &RadialProfile::F)
        .def_property_readonly("g0", &RadialProfile::g0)
        .def_property_readonly("g_end", &RadialProfile::g_end)
        .def_property_readonly("steps", &RadialProfile::steps)
        .def("F_at", &RadialProfile::F_at)
        .def("g_at", &RadialProfile::g_at);
    m.def("march",
          [](int n, int k, double R, const std::vector<std::vector<double>>& alpha) {
              RadialProblem p;
              p.n = n;
              p.k = k;
              p.R = R;
              p.alpha = alpha;
              return march(p);
          },
          py::arg("n"), py::arg("k"), py::arg("R"), py::arg("alpha"),
          "alpha[l] holds the polynomial coefficients of alpha_l in s = |z|^2");
    m.def("radial_neumann",
          [](const RadialProfile& p, double eps, double phi) {
              const auto c = radial_neumann(p, eps, phi);
              py::dict d;
              if (eps == 0.0) d["c"] = c.c;
              else d["f0"] = c.f0;
              return d;
          },
          py::arg("profile"), py::arg("eps"), py::arg("phi"));

    // Config-driven operations.
    m.def("config_roundtrip", [](const std::string& text) { return Config::parse(text).serialize(); });
    m.def("solve",
          [](const std::string& text) {
              const auto c = Config::parse(text);
              check_schema("solve", c);
              const double eps = c.get_double("problem", "eps");
              const auto grid = grid_from_config(c, static_cast<int>(c.get_int("grid", "N")));
              const Discretization disc(grid, problem_from_config(c, eps));
              SolveReport r;
              {
                  py::gil_scoped_release release;
                  r = newton_solve(disc, barrier_field(disc));
              }
              return solve_report_dict(r, disc);
          },
          py::arg("config_text"), "Newton solve from the barrier start for a 'solve' config");
    m.def("continue_epsilon",
          [](const std::string& text) {
              const auto c = Config::parse(text);
              check_schema("continue", c);
              const auto schedule = c.get_doubles("continuation", "schedule");
              const auto grid = grid_from_config(c, static_cast<int>(c.get_int("grid", "N")));
              const auto p = problem_from_config(c, schedule.front());
              ContinuationResult r;
              {
                  py::gil_scoped_release release;
                  r = continue_epsilon(p, grid, schedule);
              }
              py::dict d;
              std::vector<double> eps, c_eps;
              for (const auto& s : r.steps) {
                  eps.push_back(s.eps);
                  c_eps.push_back(s.c_eps);
              }
              d["eps"] = eps;
              d["c_eps"] = c_eps;
              d["c"] = r.c;
              d["failure"] = r.failure ? py::object(py::str(*r.failure)) : py::object(py::none());
              return d;
          },
          py::arg("config_text"));
    m.def("run",
          [](const std::string& command, const std::string& text, const std::filesystem::path& out) {
              std::ostringstream log;
              CommandOptions o;
              o.out = out;
              o.log = &log;
              int rc;
              try {
                  const auto c = Config::parse(text);
                  py::gil_scoped_release release;
                  rc = run_command(command, c, o);
              } catch (const ConfigError& e) {
                  log << "config error: " << e.what() << '\n';
                  rc = exit_config_error;
              }
              return py::make_tuple(rc, log.str());
          },
          py::arg("command"), py::arg("config_text"), py::arg("out"),
          "Run a CLI command; returns (exit code, log text)");
}
