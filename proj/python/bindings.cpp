#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "frac/analysis.hpp"
#include "frac/cli.hpp"
#include "frac/error.hpp"
#include "frac/expsum.hpp"
#include "frac/exppairs.hpp"
#include "frac/fracsum.hpp"

namespace py = pybind11;
using namespace frac;
using arithfn::ArithmeticFunction;

namespace {

py::object fraction(const Rational& q) {
    static py::object cls = py::module_::import("fractions").attr("Fraction");
    return cls(to_string(q));
}

py::object value(const Value& v) { return v.is_exact() ? fraction(v.exact()) : py::float_(v.to_double()); }

// Accepts int, str ("p/q") or fractions.Fraction.
Rational rational(const py::handle& h) {
    if (py::isinstance<py::int_>(h)) return parse_rational(py::str(h).cast<std::string>());
    if (py::isinstance<py::str>(h)) return parse_rational(h.cast<std::string>());
    if (py::hasattr(h, "numerator") && py::hasattr(h, "denominator")) {
        const auto num = py::str(h.attr("numerator")).cast<std::string>();
        const auto den = py::str(h.attr("denominator")).cast<std::string>();
        return parse_rational(num + "/" + den);
    }
    throw py::type_error("expected int, str or fractions.Fraction");
}

ArithmeticFunction function(const std::string& name, const py::object& beta, int k) {
    return ArithmeticFunction::from_name(name, rational(beta), k);
}

py::dict jutila(const expsum::JutilaCheck& c) {
    py::dict d;
    d["x"] = c.query.x;
    d["h"] = c.query.h;
    d["D"] = c.query.D;
    d["delta"] = c.query.delta;
    d["F"] = c.F;
    d["admissible"] = c.admissible;
    d["modulus"] = c.sum_modulus;
    d["bound"] = c.bound_value;
    d["ratio"] = c.ratio;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact fractional sums S_f(x) = sum_{n<=x} f(floor(x/n))";

    static py::exception<Error> error(m, "FracError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(error.ptr(), (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
        }
    });

    const auto beta_default = py::arg("beta") = "1/2";
    const auto k_default = py::arg("k") = 2;

    m.def(
        "naive_sum",
        [](const std::string& f, std::int64_t x, const py::object& beta, int k) {
            return value(fracsum::naive_sum(function(f, beta, k), x));
        },
        py::arg("f"), py::arg("x"), beta_default, k_default, "S_f(x) by direct summation.");
    m.def(
        "blocked_sum",
        [](const std::string& f, std::int64_t x, const py::object& beta, int k) {
            return value(fracsum::blocked_sum(function(f, beta, k), x));
        },
        py::arg("f"), py::arg("x"), beta_default, k_default, "S_f(x) by O(sqrt x) blocks of equal floor(x/n).");

    m.def(
        "decompose",
        [](const std::string& f, std::int64_t x, std::int64_t B, std::int64_t A, const py::object& beta, int k) {
            const auto r = fracsum::decompose(function(f, beta, k), x, A, B);
            py::dict d;
            d["f"] = r.f;
            d["x"] = r.x;
            d["A"] = r.A;
            d["B"] = r.B;
            d["exact"] = r.exact;
            d["head"] = value(r.head);
            d["M"] = value(r.M);
            d["T"] = py::make_tuple(value(r.T[0]), value(r.T[1]));
            d["T_full"] = py::make_tuple(value(r.T_full[0]), value(r.T_full[1]));
            d["T_head"] = py::make_tuple(value(r.T_head[0]), value(r.T_head[1]));
            d["E1"] = value(r.E1);
            d["E2"] = value(r.E2);
            d["S"] = value(r.S_exact);
            d["residual"] = value(r.residual);
            return d;
        },
        py::arg("f"), py::arg("x"), py::arg("B"), py::arg("A") = 1, beta_default, k_default,
        "Exact split of S_f(x) at A <= B <= sqrt(x) with its residual.");

    m.def(
        "compute_cf",
        [](const std::string& f, double tol, const py::object& beta, int k) {
            const auto c = fracsum::compute_cf(function(f, beta, k), tol);
            return py::make_tuple(c.value, c.tail_bound);
        },
        py::arg("f"), py::arg("tol") = 1e-10, beta_default, k_default,
        "C_f = sum f(n)/(n(n+1)) as (value, error_bound).");

    m.def(
        "lemma4_pair",
        [](int n) {
            const auto p = exppairs::lemma4_pair(n);
            return py::make_tuple(fraction(p.k), fraction(p.l));
        },
        py::arg("n"), "Exponent pair after n A steps from (1/2, 1/2).");
    m.def(
        "theta_ratio", [](int n) { return fraction(exppairs::theta_ratio(exppairs::lemma4_pair(n))); }, py::arg("n"));
    m.def(
        "interval_index", [](const py::object& alpha) { return exppairs::interval_index(rational(alpha)); },
        py::arg("alpha"));
    m.def(
        "theorem2_exponent",
        [](const py::object& alpha) { return fraction(exppairs::theorem2_exponent(rational(alpha))); },
        py::arg("alpha"), "Error exponent for f = 1 * g with g(n) << n^alpha.");

    m.def(
        "exp_sum_tau",
        [](std::int64_t x, std::int64_t h, std::int64_t D, int delta) {
            return expsum::exp_sum_tau({x, h, D, delta});
        },
        py::arg("x"), py::arg("h"), py::arg("D"), py::arg("delta") = 0,
        "sum_{D<n<=2D} tau(n) e(h x/(n + delta)).");
    m.def(
        "jutila_check",
        [](std::int64_t x, std::int64_t h, std::int64_t D, int delta) {
            return jutila(expsum::jutila_check({x, h, D, delta}));
        },
        py::arg("x"), py::arg("h"), py::arg("D"), py::arg("delta") = 0);

    m.def(
        "fit",
        [](const std::string& f, std::int64_t xmin, std::int64_t xmax, int points, const py::object& beta, int k,
           unsigned threads) {
            std::optional<analysis::ErrorSeries> series;
            {
                py::gil_scoped_release release;
                series = analysis::sample_errors(function(f, beta, k), xmin, xmax, points, threads);
            }
            py::list xs, errors;
            for (const auto& s : series->samples) {
                xs.append(s.x);
                errors.append(s.error);
            }
            py::dict d;
            d["x"] = xs;
            d["error"] = errors;
            d["C"] = series->cf;
            const auto fit = analysis::fit_exponent(*series);
            d["slope"] = fit.slope;
            d["intercept"] = fit.intercept;
            d["exponent"] = fit.theoretical_exponent ? fraction(*fit.theoretical_exponent) : py::none();
            return d;
        },
        py::arg("f"), py::arg("xmin"), py::arg("xmax"), py::arg("points") = 20, beta_default, k_default,
        py::arg("threads") = 0, "Sample S_f(x) - C_f x on a geometric grid and fit log|error| against log x.");

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::vector<const char*> argv = {"fracsum"};
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line interface in process; returns (exit_code, stdout, stderr).");
}
