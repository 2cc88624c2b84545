// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "catalog.hpp"
#include "fixture.hpp"
#include "json.hpp"
#include "frac/analysis.hpp"
#include "frac/expsum.hpp"
#include "frac/exppairs.hpp"
#include "frac/fracsum.hpp"

using namespace frac;
using testing_catalog::ArithmeticFunction;

namespace {

class Criterion {
public:
    void check(bool ok, const std::string& what) {
        ++checks_;
        if (!ok && failures_++ == 0) first_ = what;
    }
    void note(std::string s) { notes_ += (notes_.empty() ? "" : "; ") + std::move(s); }
    bool passed() const { return failures_ == 0 && checks_ > 0; }
    long checks() const { return checks_; }
    long failures() const { return failures_; }
    const std::string& first() const { return first_; }
    const std::string& notes() const { return notes_; }

private:
    long checks_ = 0, failures_ = 0;
    std::string first_, notes_;
};

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

// ---- 1: blocked_sum = naive_sum --------------------------------------------

// S(x) - S(x-1) = sum_{n | x} (f(x/n) - f(x/n - 1)), since floor(x/n) moves
// exactly when n divides x. With f from trial-division oracles this gives
// every S(x), x <= X, without touching the library's summation code.
std::vector<mpq_class> incremental_oracle(const ArithmeticFunction& f, std::int64_t X) {
    std::vector<mpq_class> fv(X + 1, 0);
    for (std::int64_t n = 1; n <= X; ++n) fv[n] = std::get<mpq_class>(testing_catalog::oracle_value(f, n));
    std::vector<std::vector<std::int64_t>> divs(X + 1);
    for (std::int64_t d = 1; d <= X; ++d)
        for (std::int64_t m = d; m <= X; m += d) divs[m].push_back(d);
    std::vector<mpq_class> S(X + 1, 0);
    for (std::int64_t x = 1; x <= X; ++x) {
        S[x] = S[x - 1];
        for (std::int64_t n : divs[x]) S[x] += fv[x / n] - fv[x / n - 1];
    }
    return S;
}

void oracle_equivalence(Criterion& c) {
    std::mt19937_64 rng(20240101);
    std::uniform_int_distribution<std::int64_t> dist(1, 10'000'000);
    std::vector<std::int64_t> random_x(100);
    for (auto& x : random_x) x = dist(rng);

    for (const auto& f : testing_catalog::exact_functions()) {
        const auto oracle = incremental_oracle(f, 10'000);
        const auto small = arithfn::sieve_range(f, 10'000);
        for (std::int64_t x = 1; x <= 10'000; ++x) {
            const Value b = fracsum::blocked_sum(f, x);
            c.check(b == fracsum::naive_sum(small, x), f.name() + " naive x=" + std::to_string(x));
            c.check(b.is_exact() && b.exact() == oracle[x], f.name() + " oracle x=" + std::to_string(x));
        }
        const auto table = arithfn::sieve_range(f, 10'000'000);
        for (std::int64_t x : random_x)
            c.check(fracsum::blocked_sum(f, x) == fracsum::naive_sum(table, x), f.name() + " x=" + std::to_string(x));
    }
    c.note(std::to_string(testing_catalog::exact_functions().size()) + " exact functions");
}

// ---- 2: decomposition residual ---------------------------------------------

void decomposition(Criterion& c) {
    for (const auto& f : testing_catalog::exact_functions()) {
        for (std::int64_t x : {1000, 10'000, 100'000}) {
            const auto cube = static_cast<std::int64_t>(std::cbrt(static_cast<double>(x)) + 1e-9);
            const auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
            for (std::int64_t B : {std::int64_t{2}, cube, root}) {
                const auto r = fracsum::decompose(f, x, 1, B);
                const std::string tag = f.name() + " x=" + std::to_string(x) + " B=" + std::to_string(B);
                c.check(r.residual.is_exact() && r.residual.exact() == 0, tag + " residual");
                c.check(r.S_exact == fracsum::naive_sum(f, x), tag + " S");
            }
        }
    }
}

// ---- 3: exponent-pair algebra ----------------------------------------------

void pair_algebra(Criterion& c) {
    using namespace exppairs;
    auto p = ExponentPair::base();
    for (int n = 0; n <= 20; ++n) {
        const std::string tag = " n=" + std::to_string(n);
        c.check(p == lemma4_pair(n), "iterated A" + tag);
        mpq_class expected(n + 2, (mpz_class(1) << (n + 2)) - 1);
        expected.canonicalize();
        expected = 1 - expected;
        c.check(theta_ratio(lemma4_pair(n)) == expected, "theta_ratio" + tag);
        c.check(theta_ratio(lemma4_pair(n)) < theta_ratio(lemma4_pair(n + 1)), "increasing" + tag);
        const Rational mid = (interval_left(n) + interval_right(n)) / 2;
        const auto t1 = term_exponents(mid, n, b1(n));
        c.check(t1.e1 == t1.e2, "e1 = e2 at b1" + tag);
        const auto t2 = term_exponents(mid, n, b2(n, mid));
        c.check(t2.e1 == t2.e3, "e1 = e3 at b2" + tag);
        p = a_process(p);
    }
    for (int n = 0; n <= 50; ++n) c.check(b2_sup(n) <= b1(n), "b2_sup <= b1 n=" + std::to_string(n));
}

// ---- 4: convolution exponent table -----------------------------------------

void exponent_table(Criterion& c) {
    using exppairs::theorem2_exponent;
    c.check(theorem2_exponent(0) == mpq_class(1, 3), "alpha=0");
    c.check(theorem2_exponent(mpq_class(1, 2)) == mpq_class(3, 5), "alpha=1/2");
    c.check(theorem2_exponent(mpq_class(1, 3)) == mpq_class(1, 2), "alpha=1/3");
    for (int k = 2; k <= 10; ++k) {
        mpq_class expected(k + 1, 3 * k - 1); // (1 + 1/k)/(3 - 1/k)
        expected.canonicalize();
        mpq_class alpha(1, k);
        c.check(theorem2_exponent(alpha) == expected, "k=" + std::to_string(k));
    }
}

// ---- 5: constants ----------------------------------------------------------

// sum_{n <= N} tau(n)/(n(n+1)) = sum_d sum_{m <= N/d} 1/(dm(dm+1)).
double tau_constant_direct(std::int64_t N) {
    long double total = 0, comp = 0;
    for (std::int64_t d = N; d >= 1; --d) { // small terms first
        long double inner = 0;
        for (std::int64_t n = (N / d) * d; n >= d; n -= d) {
            const long double v = static_cast<long double>(n);
            inner += 1.0L / (v * (v + 1));
        }
        const long double y = inner - comp, t = total + y;
        comp = (t - total) - y;
        total = t;
    }
    return static_cast<double>(total);
}

void constants(Criterion& c) {
    c.check(fracsum::compute_cf(ArithmeticFunction::one(), 1e-12).value == 1.0, "C_one");
    const double tau = fracsum::compute_cf(ArithmeticFunction::tau(), 1e-8).value;
    const double direct = tau_constant_direct(100'000'000);
    c.check(std::fabs(tau - direct) <= 1e-6, "C_tau vs direct sum");
    c.note("|C_tau - direct_1e8| = " + fmt(std::fabs(tau - direct)));
    for (const auto& f : testing_catalog::all_functions()) {
        if (!f.asymptotic()) continue;
        for (double tol : {1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
            const double a = fracsum::compute_cf(f, tol).value, b = fracsum::compute_cf(f, tol / 10).value;
            c.check(std::fabs(a - b) <= tol, f.name() + " nested tol=" + fmt(tol));
        }
    }
}

// ---- 6: envelope fits ------------------------------------------------------

double plain_slope(const std::vector<analysis::ErrorSample>& samples) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
    for (const auto& s : samples) {
        if (s.error == 0) continue;
        const double u = std::log(static_cast<double>(s.x)), v = std::log(std::fabs(s.error));
        sx += u, sy += v, sxx += u * u, sxy += u * v, m += 1;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void envelopes(Criterion& c) {
    struct Case {
        ArithmeticFunction f;
        double bound;
    };
    const std::vector<Case> cases = {{ArithmeticFunction::phi_over_n(), 1.0 / 3},
                                     {ArithmeticFunction::tau(), 5.0 / 11},
                                     {ArithmeticFunction::squarefree(), 3.0 / 5}};
    for (const auto& [f, bound] : cases) {
        const auto series = analysis::sample_errors(f, 1000, 10'000'000, 25);
        const auto fit = analysis::fit_exponent(series);
        c.check(series.samples.size() == 25, f.name() + " grid size");
        c.check(std::fabs(fit.slope - plain_slope(series.samples)) <= 1e-9, f.name() + " slope recomputation");
        c.check(fit.slope <= bound + 0.02, f.name() + " slope " + fmt(fit.slope) + " > " + fmt(bound + 0.02));
        std::string n = f.name() + " slope " + fmt(fit.slope) + " (<= " + fmt(bound + 0.02) + ")";
        if (f.id_kind() == arithfn::FunctionId::PhiOverN) {
            const double m = analysis::max_normalized_error(series.samples, 1.0 / 3, 1.0);
            c.check(std::isfinite(m), "phi_over_n envelope finite");
            n += ", max|E|/(x^{1/3} log x) " + fmt(m);
        }
        c.note(n);
    }
}

// ---- 7: exponential-sum parameters -----------------------------------------

void expsum_parameters(Criterion& c) {
    const auto p = expsum::params_511(100'000'000'000);
    c.check(p.D_condition && p.x_over_N_exponent == mpq_class(6, 11) && mpq_class(6, 11) < mpq_class(4, 7),
            "6/11 < 4/7");
    c.check(p.H_condition && p.H_exponent == mpq_class(1, 11) && mpq_class(1, 11) <= mpq_class(3, 22),
            "1/11 <= 3/22");

    std::ifstream in(std::string(FRAC_FIXTURE_DIR) + "/jutila_admissibility.csv");
    int cases = 0;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        std::int64_t x, h, D;
        int expected;
        char sep;
        std::istringstream row(line);
        row >> x >> sep >> h >> sep >> D >> sep >> expected;
        const auto j = expsum::jutila_check({x, h, D, 0});
        c.check(j.admissible == (expected == 1), "fixture " + line);
        c.check(std::fabs(j.F - static_cast<double>(h) * static_cast<double>(x) / static_cast<double>(D)) <=
                    1e-12 * j.F,
                "F for " + line);
        ++cases;
    }
    c.check(cases == 20, "fixture has " + std::to_string(cases) + " cases");

    const auto grid = expsum::jutila_grid({100'000, 1'000'000, 10'000'000}, {100, 1000, 10'000}, 8);
    double worst = 0;
    for (const auto& q : grid) {
        c.check(q.admissible, "grid query admissible");
        worst = std::max(worst, q.ratio);
    }
    const double recorded = fixture::recorded("jutila_ratio_max", worst);
    c.check(!grid.empty() && worst <= recorded * (1 + 1e-9), "ratio " + fmt(worst) + " > recorded " + fmt(recorded));
    c.note(std::to_string(grid.size()) + " grid queries, max ratio " + fmt(worst) + " (recorded " + fmt(recorded) + ")");
}

// ---- 8: performance --------------------------------------------------------

template <class F>
double seconds(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void performance(Criterion& c) {
    const auto tau = ArithmeticFunction::tau();
    Value big, naive;
    const double tb = seconds([&] { big = fracsum::blocked_sum(tau, 1'000'000'000); });
    const double tn = seconds([&] { naive = fracsum::naive_sum(tau, 10'000'000); });
    c.check(tb < 10.0, "blocked_sum(tau, 1e9) took " + fmt(tb) + " s");
    c.check(tn < 30.0, "naive_sum(tau, 1e7) took " + fmt(tn) + " s");
    c.check(naive == fracsum::blocked_sum(tau, 10'000'000), "values agree at 1e7");
    c.note("blocked 1e9: " + fmt(tb) + " s, naive 1e7: " + fmt(tn) + " s");
}

// ---- 9: CLI verify ---------------------------------------------------------

std::pair<int, std::string> run_cli(const std::string& args) {
    const std::string cmd = std::string(FRAC_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string without_run_meta(const std::string& text) {
    auto j = nlohmann::ordered_json::parse(text);
    j.erase("run_meta");
    return j.dump(2);
}

void cli_verify(Criterion& c) {
    const auto a = run_cli("verify"), b = run_cli("verify");
    c.check(a.first == 0, "verify exit " + std::to_string(a.first));
    c.check(b.first == 0, "second verify exit " + std::to_string(b.first));
    try {
        c.check(without_run_meta(a.second) == without_run_meta(b.second), "outputs differ outside run_meta");
        const auto j = nlohmann::ordered_json::parse(a.second);
        c.check(j["result"]["suites"].size() == 5, "five suites");
    } catch (const std::exception& e) {
        c.check(false, std::string("unparsable output: ") + e.what());
    }
}

} // namespace

int main() {
    struct Entry {
        int id;
        std::string name;
        double limit_s;
        std::function<void(Criterion&)> run;
    };
    const std::vector<Entry> entries = {
        {1, "oracle equivalence", 300, oracle_equivalence},
        {2, "decomposition exactness", 120, decomposition},
        {3, "exponent-pair algebra", 1, pair_algebra},
        {4, "convolution exponent table", 1, exponent_table},
        {5, "mean-value constants", 120, constants},
        {6, "error envelopes on [1e3, 1e7]", 1200, envelopes},
        {7, "exponential-sum parameters", 600, expsum_parameters},
        {8, "performance", 40, performance},
        {9, "CLI verify determinism", 600, cli_verify},
    };
    bool all = true;
    for (const auto& e : entries) {
        Criterion c;
        double t = 0;
        try {
            t = seconds([&] { e.run(c); });
        } catch (const std::exception& ex) {
            c.check(false, std::string("exception: ") + ex.what());
        }
        c.check(t < e.limit_s, "runtime " + fmt(t) + " s over " + fmt(e.limit_s) + " s");
        all = all && c.passed();
        std::cout << (c.passed() ? "PASS" : "FAIL") << " criterion " << e.id << ": " << e.name << " — " << c.checks()
                  << " checks, " << fmt(t) << " s";
        if (!c.notes().empty()) std::cout << " [" << c.notes() << "]";
        if (!c.passed()) std::cout << " — " << c.failures() << " failed, first: " << c.first();
        std::cout << std::endl;
    }
    return all ? 0 : 1;
}
