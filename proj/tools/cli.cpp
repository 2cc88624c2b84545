#include "frac/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "frac/analysis.hpp"
#include "frac/error.hpp"
#include "frac/expsum.hpp"
#include "frac/exppairs.hpp"
#include "frac/fracsum.hpp"

#ifndef FRAC_VERSION
#define FRAC_VERSION "0.0.0"
#endif

namespace frac::cli {

namespace {

using json = nlohmann::ordered_json;
using arithfn::ArithmeticFunction;

// ---- serialization --------------------------------------------------------

json number(double d) {
    if (!std::isfinite(d)) return nullptr;
    return d;
}

json value_json(const Value& v) {
    if (v.is_exact()) return to_string(v.exact());
    return number(v.to_double());
}

std::string cell(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    if (j.is_null()) return "";
    if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
    if (j.is_number_float()) return format_double(j.get<double>());
    return j.dump();
}

/// A command's output: the JSON payload plus a flat table for CSV.
struct Output {
    json result = json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

// ---- shared options -------------------------------------------------------

struct FunctionFlags {
    std::string name = "tau";
    std::string beta = "1/2";
    int k = 2;

    ArithmeticFunction get() const { return ArithmeticFunction::from_name(name, parse_rational(beta), k); }

    void add_to(CLI::App* app) {
        app->add_option("--f", name, "function id: one, id, tau, phi_over_n, sigma_beta_norm, lambda, squarefree, kfree, mobius")
            ->required();
        app->add_option("--beta", beta, "beta for sigma_beta_norm (rational string)");
        app->add_option("--k", k, "k for kfree");
    }

    void record(json& p) const {
        p["f"] = name;
        p["beta"] = beta;
        p["k"] = k;
    }
};

void require_asymptotic(const ArithmeticFunction& f) {
    if (!f.asymptotic())
        raise(ErrorKind::Divergence, f.name() + " grows like x^1: these commands need a function with alpha < 1");
}

// ---- commands -------------------------------------------------------------

Output sum_command(const ArithmeticFunction& f, std::int64_t x, const std::string& method) {
    require_asymptotic(f);
    Output o;
    Value s;
    if (method == "naive")
        s = fracsum::naive_sum(f, x);
    else if (method == "blocked")
        s = fracsum::blocked_sum(f, x);
    else
        raise(ErrorKind::Parameter, "method must be naive or blocked");
    o.result["f"] = f.name();
    o.result["x"] = x;
    o.result["method"] = method;
    o.result["exact"] = s.is_exact();
    o.result["S"] = value_json(s);
    o.columns = {"f", "x", "method", "exact", "S"};
    o.rows.push_back({f.name(), x, method, s.is_exact(), value_json(s)});
    return o;
}

Output decompose_command(const ArithmeticFunction& f, std::int64_t x, std::int64_t A, std::int64_t B) {
    const auto r = fracsum::decompose(f, x, A, B);
    Output o;
    o.result["f"] = r.f;
    o.result["x"] = r.x;
    o.result["A"] = r.A;
    o.result["B"] = r.B;
    o.result["exact"] = r.exact;
    const std::vector<std::pair<std::string, const Value*>> parts = {
        {"head", &r.head},       {"M", &r.M},           {"T0", &r.T[0]},           {"T1", &r.T[1]},
        {"T0_full", &r.T_full[0]}, {"T1_full", &r.T_full[1]}, {"T0_head", &r.T_head[0]}, {"T1_head", &r.T_head[1]},
        {"E1", &r.E1},           {"E2", &r.E2},         {"S", &r.S_exact},         {"residual", &r.residual}};
    o.columns = {"f", "x", "A", "B", "exact"};
    std::vector<json> row = {r.f, r.x, r.A, r.B, r.exact};
    for (const auto& [name, v] : parts) {
        o.result[name] = value_json(*v);
        o.columns.push_back(name);
        row.push_back(value_json(*v));
    }
    o.rows.push_back(std::move(row));
    return o;
}

Output constant_command(const ArithmeticFunction& f, double tol) {
    const auto c = fracsum::compute_cf(f, tol);
    Output o;
    o.result["f"] = c.f;
    o.result["tol"] = number(tol);
    o.result["C"] = number(c.value);
    o.result["head_N"] = c.truncation_N;
    o.result["error_bound"] = number(c.tail_bound);
    o.columns = {"f", "tol", "C", "head_N", "error_bound"};
    o.rows.push_back({c.f, number(tol), number(c.value), c.truncation_N, number(c.tail_bound)});
    return o;
}

Output pairs_command(int n_max, const std::optional<std::string>& alpha_text) {
    using namespace exppairs;
    if (n_max < 0 || n_max > kMaxIndex) raise(ErrorKind::Parameter, "--n must lie in [0, 64]");
    Output o;
    o.columns = {"n", "k", "l", "theta_ratio", "interval_left", "interval_right", "b1", "b2_sup", "provenance"};
    json pairs = json::array();
    for (int n = 0; n <= n_max; ++n) {
        const auto p = lemma4_pair(n);
        std::vector<json> row = {n,
                                 to_string(p.k),
                                 to_string(p.l),
                                 to_string(theta_ratio(p)),
                                 to_string(interval_left(n)),
                                 to_string(interval_right(n)),
                                 to_string(b1(n)),
                                 to_string(b2_sup(n)),
                                 p.provenance};
        json entry = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) entry[o.columns[i]] = row[i];
        pairs.push_back(std::move(entry));
        o.rows.push_back(std::move(row));
    }
    o.result["pairs"] = std::move(pairs);
    if (alpha_text) {
        const Rational alpha = parse_rational(*alpha_text);
        const int n = interval_index(alpha);
        const Rational a = optimal_a_exponent(alpha);
        const auto t = term_exponents(alpha, n, a);
        json a_json;
        a_json["alpha"] = to_string(alpha);
        a_json["interval_index"] = n;
        a_json["b1"] = to_string(b1(n));
        a_json["b2"] = to_string(b2(n, alpha));
        a_json["error_exponent"] = to_string(theorem2_exponent(alpha));
        a_json["a_exponent"] = to_string(a);
        a_json["term_exponents"] = {to_string(t.e1), to_string(t.e2), to_string(t.e3)};
        o.result["alpha"] = std::move(a_json);
    }
    return o;
}

Output fit_command(const ArithmeticFunction& f, std::int64_t xmin, std::int64_t xmax, int points, unsigned threads) {
    const auto series = analysis::sample_errors(f, xmin, xmax, points, threads);
    Output o;
    o.result["f"] = f.name();
    o.result["C"] = number(series.cf);
    o.result["C_tol"] = number(series.cf_tol);
    json samples = json::array();
    o.columns = {"x", "S", "Cx", "error"};
    for (const auto& s : series.samples) {
        samples.push_back({{"x", s.x}, {"S", value_json(s.s_value)}, {"Cx", number(s.cf_x)}, {"error", number(s.error)}});
        o.rows.push_back({s.x, value_json(s.s_value), number(s.cf_x), number(s.error)});
    }
    o.result["samples"] = std::move(samples);
    try {
        const auto fit = analysis::fit_exponent(series);
        json fj;
        fj["slope"] = number(fit.slope);
        fj["intercept"] = number(fit.intercept);
        fj["nonzero_samples"] = fit.used;
        o.result["fit"] = std::move(fj);
        try {
            const auto r = analysis::compare_catalog(fit);
            json cj;
            cj["exponent"] = to_string(r.catalog_exponent);
            cj["source"] = r.source;
            cj["margin"] = number(r.margin);
            cj["max_constant"] = number(r.max_constant);
            cj["red_flag"] = r.red_flag;
            o.result["catalog"] = std::move(cj);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::CatalogMiss) throw;
            o.result["catalog"] = nullptr;
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientData) throw;
        o.result["fit"] = nullptr;
        o.result["fit_note"] = e.what();
    }
    return o;
}

json jutila_json(const expsum::JutilaCheck& c) {
    return {{"x", c.query.x},         {"h", c.query.h},           {"D", c.query.D},
            {"delta", c.query.delta}, {"F", number(c.F)},         {"admissible", c.admissible},
            {"modulus", number(c.sum_modulus)}, {"bound", number(c.bound_value)}, {"ratio", number(c.ratio)}};
}

struct ExpsumFlags {
    std::string mode = "single";
    std::int64_t x = 1'000'000, h = 1, D = 1000, N = 0, H = 1;
    int delta = 0, samples = 8;
    std::vector<std::int64_t> xs{100'000, 1'000'000, 10'000'000}, Ds{100, 1000, 10'000};
};

Output expsum_command(const ExpsumFlags& fl) {
    Output o;
    o.result["mode"] = fl.mode;
    if (fl.mode == "single") {
        const auto z = expsum::exp_sum_tau({fl.x, fl.h, fl.D, fl.delta});
        o.result["re"] = number(z.real());
        o.result["im"] = number(z.imag());
        o.result["modulus"] = number(std::abs(z));
        o.columns = {"x", "h", "D", "delta", "re", "im", "modulus", "F", "admissible", "ratio"};
        std::vector<json> row = {fl.x, fl.h, fl.D, fl.delta, number(z.real()), number(z.imag()), number(std::abs(z))};
        if (fl.h >= 1) {
            const auto c = expsum::jutila_check({fl.x, fl.h, fl.D, fl.delta});
            o.result["jutila"] = jutila_json(c);
            row.insert(row.end(), {number(c.F), c.admissible, number(c.ratio)});
        } else {
            o.result["jutila"] = nullptr;
            row.insert(row.end(), {nullptr, nullptr, nullptr});
        }
        o.rows.push_back(std::move(row));
    } else if (fl.mode == "jutila-grid") {
        const auto grid = expsum::jutila_grid(fl.xs, fl.Ds, fl.samples);
        json arr = json::array();
        double worst = 0;
        o.columns = {"x", "h", "D", "delta", "F", "admissible", "modulus", "bound", "ratio"};
        for (const auto& c : grid) {
            arr.push_back(jutila_json(c));
            worst = std::max(worst, c.ratio);
            o.rows.push_back({c.query.x, c.query.h, c.query.D, c.query.delta, number(c.F), c.admissible,
                              number(c.sum_modulus), number(c.bound_value), number(c.ratio)});
        }
        o.result["checks"] = std::move(arr);
        o.result["max_ratio"] = number(worst);
    } else if (fl.mode == "bordelles") {
        const auto r = expsum::bordelles_rhs(fl.x, fl.N, fl.H);
        o.result["x"] = r.x;
        o.result["N"] = r.N;
        o.result["H"] = r.H;
        o.result["max_bracket"] = number(r.max_bracket);
        o.result["rhs"] = number(r.rhs);
        o.result["largest_h_term"] = number(r.largest_h_term);
        json terms = json::array();
        o.columns = {"D", "delta", "D_over_H", "h_sum", "bracket"};
        for (const auto& t : r.terms) {
            json hs = json::array();
            for (double v : t.h_terms) hs.push_back(number(v));
            terms.push_back({{"D", t.D}, {"delta", t.delta}, {"D_over_H", number(t.D_over_H)}, {"h_terms", hs},
                             {"bracket", number(t.bracket)}});
            o.rows.push_back({t.D, t.delta, number(t.D_over_H), number(t.bracket - t.D_over_H), number(t.bracket)});
        }
        o.result["terms"] = std::move(terms);
    } else if (fl.mode == "params511") {
        const auto p = expsum::params_511(fl.x);
        o.result["x"] = p.x;
        o.result["N"] = number(p.N);
        o.result["H"] = number(p.H);
        o.result["x_over_N_exponent"] = to_string(p.x_over_N_exponent);
        o.result["D_limit_exponent"] = to_string(p.D_limit_exponent);
        o.result["D_condition"] = p.D_condition;
        o.result["H_exponent"] = to_string(p.H_exponent);
        o.result["H_limit_exponent"] = to_string(p.H_limit_exponent);
        o.result["H_condition"] = p.H_condition;
        o.columns = {"x", "N", "H", "D_condition", "H_condition"};
        o.rows.push_back({p.x, number(p.N), number(p.H), p.D_condition, p.H_condition});
    } else {
        raise(ErrorKind::Parameter, "--mode must be single, jutila-grid, bordelles or params511");
    }
    return o;
}

Output verify_command(std::ostream& err, bool& all_passed) {
    Output o;
    const auto suites = run_verify();
    json arr = json::array();
    o.columns = {"suite", "name", "passed", "checks", "failures", "first_failure"};
    all_passed = true;
    err << std::left << std::setw(7) << "suite" << std::setw(36) << "name" << std::setw(8) << "result"
        << "checks\n";
    for (const auto& s : suites) {
        all_passed = all_passed && s.passed;
        arr.push_back({{"suite", s.id},
                       {"name", s.name},
                       {"passed", s.passed},
                       {"checks", s.checks},
                       {"failures", s.failures},
                       {"first_failure", s.first_failure}});
        o.rows.push_back({s.id, s.name, s.passed, s.checks, s.failures, s.first_failure});
        err << std::left << std::setw(7) << s.id << std::setw(36) << s.name << std::setw(8)
            << (s.passed ? "PASS" : "FAIL") << s.checks;
        if (!s.passed) err << "  (" << s.failures << " failed; first: " << s.first_failure << ")";
        err << '\n';
    }
    o.result["suites"] = std::move(arr);
    o.result["passed"] = all_passed;
    return o;
}

// ---- envelope -------------------------------------------------------------

std::string utc_timestamp() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

void emit(std::ostream& out, const std::string& format, const std::string& command, const json& params,
          const Output& o, double duration_ms) {
    if (format == "csv") {
        for (std::size_t i = 0; i < o.columns.size(); ++i) out << (i ? "," : "") << o.columns[i];
        out << '\n';
        for (const auto& row : o.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell(row[i]);
            out << '\n';
        }
        return;
    }
    json env;
    env["command"] = command;
    env["params"] = params;
    env["result"] = o.result;
    env["run_meta"] = {{"version", FRAC_VERSION}, {"timestamp", utc_timestamp()}, {"duration_ms", number(duration_ms)}};
    out << env.dump(2) << '\n';
}

int exit_code(ErrorKind k) { return k == ErrorKind::Resource ? 2 : 1; }

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fractional sums S_f(x) = sum_{n<=x} f(floor(x/n)): exact evaluation, constants, exponents"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help); // usage text on bad input
    app.set_version_flag("--version", FRAC_VERSION);

    std::string format = "json";
    unsigned threads = 0;
    auto add_format = [&](CLI::App* c) {
        c->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    };

    FunctionFlags ff;
    std::int64_t x = 0, A = 1, B = 2, xmin = 1000, xmax = 1'000'000;
    std::string method = "blocked";
    double tol = 1e-10;
    int n = 3, points = 20;
    std::optional<std::string> alpha;
    ExpsumFlags ef;

    auto* sum = app.add_subcommand("sum", "S_f(x) by direct or blocked summation");
    ff.add_to(sum);
    sum->add_option("--x", x, "argument x >= 1")->required();
    sum->add_option("--method", method, "naive or blocked")->check(CLI::IsMember({"naive", "blocked"}));
    add_format(sum);

    FunctionFlags fd;
    auto* dec = app.add_subcommand("decompose", "exact split of S_f(x) at A and B");
    fd.add_to(dec);
    dec->add_option("--x", x, "argument x")->required();
    dec->add_option("--A", A, "1 <= A <= B");
    dec->add_option("--B", B, "B <= floor(sqrt x)")->required();
    add_format(dec);

    FunctionFlags fc;
    auto* con = app.add_subcommand("constant", "mean-value constant C_f");
    fc.add_to(con);
    con->add_option("--tol", tol, "absolute tolerance");
    add_format(con);

    auto* pairs = app.add_subcommand("pairs", "exponent pairs from repeated A steps, with balancing data");
    pairs->add_option("--n", n, "largest index, 0..64");
    pairs->add_option("--alpha", alpha, "growth exponent alpha in [0, 1) as a rational string");
    add_format(pairs);

    FunctionFlags fit_f;
    auto* fit = app.add_subcommand("fit", "sample S_f(x) - C_f x and fit an error exponent");
    fit_f.add_to(fit);
    fit->add_option("--xmin", xmin, "smallest x (>= 2)");
    fit->add_option("--xmax", xmax, "largest x");
    fit->add_option("--points", points, "grid points, 5..200");
    fit->add_option("--threads", threads, "worker threads (0 = all cores)");
    add_format(fit);

    auto* es = app.add_subcommand("expsum", "divisor-weighted exponential sums");
    es->set_help_flag("--help", "print this help message and exit"); // -h would clash with --h
    es->add_option("--mode", ef.mode, "single, jutila-grid, bordelles or params511")
        ->check(CLI::IsMember({"single", "jutila-grid", "bordelles", "params511"}));
    es->add_option("--x", ef.x, "x (single, bordelles, params511)");
    es->add_option("--h", ef.h, "frequency h >= 0 (single)");
    es->add_option("--D", ef.D, "range D < n <= 2D (single)");
    es->add_option("--delta", ef.delta, "shift 0 or 1 (single)");
    es->add_option("--N", ef.N, "N in [x^{1/3}, x^{1/2}) (bordelles)");
    es->add_option("--H", ef.H, "largest frequency (bordelles)");
    es->add_option("--xs", ef.xs, "x values (jutila-grid), comma separated")->delimiter(',');
    es->add_option("--Ds", ef.Ds, "D values (jutila-grid), comma separated")->delimiter(',');
    es->add_option("--samples", ef.samples, "h samples per (x, D) (jutila-grid)");
    add_format(es);

    auto* ver = app.add_subcommand("verify", "run the invariant suites 1-5 and print a pass/fail table");
    add_format(ver);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return 1;
    }

    const auto start = std::chrono::steady_clock::now();
    json params = json::object();
    std::string command;
    try {
        Output o;
        int code = 0;
        if (sum->parsed()) {
            command = "sum";
            ff.record(params);
            params["x"] = x;
            params["method"] = method;
            o = sum_command(ff.get(), x, method);
        } else if (dec->parsed()) {
            command = "decompose";
            fd.record(params);
            params["x"] = x;
            params["A"] = A;
            params["B"] = B;
            o = decompose_command(fd.get(), x, A, B);
        } else if (con->parsed()) {
            command = "constant";
            fc.record(params);
            params["tol"] = number(tol);
            o = constant_command(fc.get(), tol);
        } else if (pairs->parsed()) {
            command = "pairs";
            params["n"] = n;
            params["alpha"] = alpha ? json(*alpha) : json(nullptr);
            o = pairs_command(n, alpha);
        } else if (fit->parsed()) {
            command = "fit";
            fit_f.record(params);
            params["xmin"] = xmin;
            params["xmax"] = xmax;
            params["points"] = points;
            params["threads"] = threads;
            o = fit_command(fit_f.get(), xmin, xmax, points, threads);
        } else if (es->parsed()) {
            command = "expsum";
            params["mode"] = ef.mode;
            if (ef.mode == "single") params.update({{"x", ef.x}, {"h", ef.h}, {"D", ef.D}, {"delta", ef.delta}});
            if (ef.mode == "jutila-grid") params.update({{"xs", ef.xs}, {"Ds", ef.Ds}, {"samples", ef.samples}});
            if (ef.mode == "bordelles") params.update({{"x", ef.x}, {"N", ef.N}, {"H", ef.H}});
            if (ef.mode == "params511") params["x"] = ef.x;
            o = expsum_command(ef);
        } else if (ver->parsed()) {
            command = "verify";
            bool ok = false;
            o = verify_command(err, ok);
            code = ok ? 0 : 1;
        }
        params["format"] = format;
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        emit(out, format, command, params, o, std::round(ms * 1000) / 1000);
        return code;
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::bad_alloc&) {
        err << "error (resource): out of memory\n";
        return 2;
    }
}

} // namespace frac::cli
