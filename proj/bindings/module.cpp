#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hslab/config.hpp"
#include "hslab/hpop.hpp"
#include "hslab/patterns.hpp"
#include "hslab/properties.hpp"
#include "hslab/realpoly.hpp"
#include "hslab/solver.hpp"

namespace py = pybind11;
using namespace hslab;

namespace {

// Polynomials cross the boundary as plain coefficient lists (ascending
// powers); the C++ value types stay internal.
RealPolynomial poly(const std::vector<double>& coeffs) { return RealPolynomial(coeffs); }

DifferentialOperator make_operator(const std::map<int, std::vector<double>>& terms) {
    std::map<int, RealPolynomial> t;
    for (const auto& [k, c] : terms) t.emplace(k, RealPolynomial(c));
    return DifferentialOperator(std::move(t));
}

py::dict pair_dict(const StieltjesPair& p) {
    py::dict d;
    d["pattern_a"] = p.pattern.a;
    d["v"] = p.v.coeffs();
    d["f"] = p.f.coeffs();
    d["v_roots"] = p.v_roots;
    d["f_roots"] = p.f_roots;
    d["iterations"] = p.iterations;
    d["residual"] = p.residual;
    d["monotone"] = p.monotone;
    return d;
}

py::dict report_dict(const SolveReport& rep) {
    py::dict d;
    d["n"] = rep.n;
    d["r"] = rep.r;
    py::list pairs;
    for (const StieltjesPair& p : rep.pairs) pairs.append(pair_dict(p));
    d["pairs"] = pairs;
    py::list failures;
    for (const SolveFailure& f : rep.failures) {
        py::dict e;
        e["pattern_a"] = f.pattern.a;
        e["message"] = f.message;
        failures.append(e);
    }
    d["failures"] = failures;
    d["hypothesis_warning"] =
        rep.hypothesis_warning ? py::cast(*rep.hypothesis_warning) : py::none();
    return d;
}

py::list checks_list(const VerificationReport& rep) {
    py::list out;
    for (const CheckEntry& c : rep.checks) {
        py::dict e;
        e["check"] = c.name;
        e["pass"] = c.pass;
        e["margin"] = c.margin;
        e["details"] = c.details;
        out.append(e);
    }
    return out;
}

SolveOptions options(double tol, int max_iter, int jobs) {
    SolveOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    opts.jobs = jobs;
    return opts;
}

}  // namespace

PYBIND11_MODULE(_hslab, m) {
    m.doc() = "Stieltjes/Van Vleck pairs of hyperbolicity-preserving operators";

    py::register_exception<Error>(m, "Error");
    py::register_exception<NoConvergenceError>(m, "NoConvergenceError");

    py::class_<DifferentialOperator>(m, "Operator")
        .def(py::init(&make_operator), py::arg("terms"),
             "Build from a map {derivative order: coefficient list}.")
        .def_static(
            "classical",
            [](const std::vector<double>& alphas, const std::vector<double>& gammas) {
                return classical_operator(alphas, gammas);
            },
            py::arg("alphas"), py::arg("gammas"))
        .def_static(
            "sandwich",
            [](const std::vector<double>& p, int m, int n) {
                return sandwich_operator(poly(p), m, n);
            },
            py::arg("p"), py::arg("m"), py::arg("n"))
        .def_static(
            "pencil",
            [](const std::vector<std::vector<double>>& a,
               const std::vector<std::vector<double>>& b,
               const std::vector<std::vector<double>>& c) {
                return pencil_operator(a, b, c);
            },
            py::arg("a"), py::arg("b"), py::arg("c"))
        .def_property_readonly("fuchs_index", &DifferentialOperator::fuchs_index)
        .def_property_readonly("min_order", &DifferentialOperator::min_order)
        .def_property_readonly("max_order", &DifferentialOperator::max_order)
        .def("coefficient",
             [](const DifferentialOperator& t, int k) { return t.coefficient(k).coeffs(); },
             py::arg("k"))
        .def("apply",
             [](const DifferentialOperator& t, const std::vector<double>& f) {
                 return apply(t, poly(f)).coeffs();
             },
             py::arg("f"))
        .def("lambda_n",
             [](const DifferentialOperator& t, int n) { return lambda_n(t, n); },
             py::arg("n"))
        .def("__repr__", [](const DifferentialOperator& t) {
            return "<Operator orders " + std::to_string(t.min_order()) + ".." +
                   std::to_string(t.max_order()) + ", fuchs_index " +
                   std::to_string(t.fuchs_index()) + ">";
        });

    m.def("load_operator",
          [](const std::string& path) { return load_operator_file(path); },
          py::arg("path"), "Load an operator from a JSON config file.");

    m.def("real_roots",
          [](const std::vector<double>& c) { return real_roots(poly(c)).roots; },
          py::arg("coeffs"), "Certified ascending real roots of a hyperbolic polynomial.");
    m.def("from_roots",
          [](const std::vector<double>& roots, double leading) {
              return from_roots(roots, leading).coeffs();
          },
          py::arg("roots"), py::arg("leading") = 1.0);
    m.def("proper_position",
          [](const std::vector<double>& f, const std::vector<double>& g) {
              return std::string(to_string(proper_position(poly(f), poly(g))));
          },
          py::arg("f"), py::arg("g"),
          "One of 'F_LL_G', 'G_LL_F', 'PROPORTIONAL', 'NONE'.");

    m.def("solve_all",
          [](const DifferentialOperator& t, int n, double tol, int max_iter, int jobs) {
              return report_dict(solve_all(t, n, options(tol, max_iter, jobs)));
          },
          py::arg("op"), py::arg("n"), py::arg("tol") = 1e-11, py::arg("max_iter") = 5000,
          py::arg("jobs") = 1,
          "All Stieltjes/Van Vleck pairs at degree n, one per zero pattern.");
    m.def("solve_pair",
          [](const DifferentialOperator& t, int n, const std::vector<int>& a, double tol,
             int max_iter) {
              const ZeroPattern pattern = ZeroPattern::from_a(n + int(a.size()), a);
              return pair_dict(solve_pair(t, pattern, options(tol, max_iter, 1)));
          },
          py::arg("op"), py::arg("n"), py::arg("a"), py::arg("tol") = 1e-11,
          py::arg("max_iter") = 5000,
          "The pair whose Van Vleck roots sit at the 1-based merged positions a.");
    m.def("brute_force_oracle",
          [](const DifferentialOperator& t, int n, std::uint64_t seed) {
              const OracleResult res = brute_force_oracle(t, n, seed);
              py::dict d;
              d["expected"] = res.expected;
              d["complete"] = res.complete;
              py::list pairs;
              for (const OraclePair& p : res.pairs) {
                  py::dict e;
                  e["v"] = p.v.coeffs();
                  e["f"] = p.f.coeffs();
                  pairs.append(e);
              }
              d["pairs"] = pairs;
              return d;
          },
          py::arg("op"), py::arg("n"), py::arg("seed") = 0,
          "Pattern-free reference solver; practical only for small n + r.");

    m.def("verify_all",
          [](const DifferentialOperator& t, int n, int jobs) {
              SolveOptions opts;
              opts.jobs = jobs;
              return checks_list(verify_all(t, n, opts));
          },
          py::arg("op"), py::arg("n"), py::arg("jobs") = 1,
          "Structural checks on the degree-n solution set (count, location, "
          "simplicity, interlacing).");
    m.def("spectral_polynomial",
          [](const DifferentialOperator& t, int n) {
              const SpectralPolynomial sp = spectral_polynomial(t, n);
              py::dict d;
              d["n"] = sp.n;
              d["coeffs"] = sp.p.coeffs();
              d["hypothesis_m_to_n"] = sp.hypothesis_m_to_n;
              d["hypothesis_1_to_n"] = sp.hypothesis_1_to_n;
              return d;
          },
          py::arg("op"), py::arg("n"),
          "Monic polynomial collecting all Van Vleck zeros at degree n "
          "(Fuchs index 1 only).");

    m.def("diagnose",
          [](const DifferentialOperator& t, std::uint64_t seed, int samples) {
              const HpDiagnostics d = diagnose(t, seed, samples);
              py::dict out;
              out["fuchs_index"] = d.fuchs_index;
              out["nondegenerate"] = d.nondegenerate;
              out["degree_bounds_ok"] = d.degree_bounds_ok;
              out["leading_poly"] = d.leading_poly.coeffs();
              out["leading_poly_ok"] = d.leading_poly_ok;
              out["coefficient_chain_ok"] = d.coefficient_chain_ok;
              out["leading_sign"] = d.leading_sign;
              out["samples_used"] = d.samples_used;
              out["structural_ok"] = d.structural_ok();
              if (d.witness) {
                  py::dict w;
                  w["z_re"] = d.witness->z_re;
                  w["z_im"] = d.witness->z_im;
                  w["w_re"] = d.witness->w_re;
                  w["w_im"] = d.witness->w_im;
                  out["witness"] = w;
              } else {
                  out["witness"] = py::none();
              }
              return out;
          },
          py::arg("op"), py::arg("seed") = 0, py::arg("samples") = 1000,
          "Structural report plus a randomized search for a stability "
          "counterexample of the symbol.");

    m.attr("__version__") = "0.1.0";
}
